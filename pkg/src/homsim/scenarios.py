"""Scenario configuration, runners, and file emitters.

A scenario is described by a single JSON document (all keys optional; the
scenario name fills in its own defaults).  Angles are accepted as numbers
in radians or as strings of the form ``"pi"``, ``"pi/2"``, ``"3*pi/4"``.
Outputs are CSV tables with a ``#``-prefixed JSON metadata header line, or
a single JSON document; rerunning an identical resolved config reproduces
the files byte for byte, so no timestamps are ever written into them.
"""

from __future__ import annotations

import copy
import json
import math
import re
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .correlation import (
    CorrelationResult,
    TauGrid,
    classical_baseline,
    dephasing_sweep,
    evaluate,
)
from .sources import ClassicalSource, SpdcSource, ZetaModel
from .spectral import Envelope, GAUSSIAN_PEAK_ONE, SpectralProfile, UNITY, build_grid, filter_grid

SCENARIOS = ("dip", "maps", "intensities", "filtered", "g2", "dephasing", "classical")

_ENVELOPE_WORDS = {"gaussian": GAUSSIAN_PEAK_ONE, "gaussian_peak_one": GAUSSIAN_PEAK_ONE, "unity": UNITY}


class ConfigError(ValueError):
    """Invalid scenario configuration; ``key`` names the offending entry."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


_PI_PATTERN = re.compile(
    r"^\s*([+-]?)\s*(?:(\d+(?:\.\d+)?)\s*\*\s*)?pi(?:\s*/\s*(\d+(?:\.\d+)?))?\s*$",
    re.IGNORECASE,
)


def parse_angle(value, key: str) -> float:
    """Angle in radians from a number or a ``k*pi/m`` style string."""
    if isinstance(value, bool):
        raise ConfigError(f"expected an angle, got {value!r}", key)
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _PI_PATTERN.match(value)
        if m:
            sign = -1.0 if m.group(1) == "-" else 1.0
            num = float(m.group(2)) if m.group(2) else 1.0
            den = float(m.group(3)) if m.group(3) else 1.0
            return sign * num * math.pi / den
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"cannot parse angle {value!r}", key) from None
    raise ConfigError(f"expected an angle, got {value!r}", key)


@dataclass(frozen=True)
class ZetaSection:
    kind: str = "fixed"
    value: float = 0.0
    nodes: int = 129
    scheme: str = "grid"

    def to_model(self) -> ZetaModel:
        return ZetaModel(kind=self.kind, value=self.value, nodes=self.nodes, scheme=self.scheme)


@dataclass(frozen=True)
class SourceSection:
    model: str = "spdc"
    phi: float = 0.0
    phi_prime: float = math.pi / 2
    zeta: ZetaSection = ZetaSection()
    delta: float = 1.0
    delta_s: float = 1.0
    delta_i: float = 1.0
    swap: str = "exact_half"


@dataclass(frozen=True)
class SpectralSection:
    span_halfwidth: float = 2.0
    nodes: int = 201
    scheme: str = "grid"
    envelope: str = "gaussian"
    p: int = 1
    filter_halfwidth: float | None = None


@dataclass(frozen=True)
class TauSection:
    start: float | None = -3.0
    stop: float | None = 3.0
    points: int | None = 241
    values: tuple[float, ...] | None = None

    def to_grid(self) -> TauGrid:
        if self.values is not None:
            return TauGrid(np.asarray(self.values, dtype=float))
        return TauGrid.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str = "dip"
    source: SourceSection = SourceSection()
    spectral: SpectralSection = SpectralSection()
    tau: TauSection = TauSection()
    form: str = "paper"
    seed: int = 12345
    out_format: str = "csv"
    zeta_halfwidths: tuple[float, ...] | None = None


# Scenario defaults, expressed in the JSON vocabulary and merged under any
# user-supplied document.  dip runs the ideal anticorrelation configuration;
# maps/intensities/filtered disable the swap randomness so the two ports'
# structure is visible; classical switches the source model and uses the
# squared envelope in its coincidence integrand.
_BASE_DEFAULTS: dict = {
    "spectral": {
        "span_halfwidth": 2.0,
        "nodes": 201,
        "scheme": "grid",
        "envelope": "gaussian",
        "p": 1,
        "filter_halfwidth": None,
    },
    "tau": {"start": -3.0, "stop": 3.0, "points": 241},
    "form": "paper",
    "seed": 12345,
    "format": "csv",
}

_MODEL_SOURCE_DEFAULTS: dict[str, dict] = {
    "spdc": {
        "model": "spdc",
        "phi_prime": math.pi / 2,
        "zeta": {"fixed": 0.0, "nodes": 129, "scheme": "grid"},
        "delta": 1.0,
        "swap": "exact_half",
    },
    "classical": {
        "model": "classical",
        "phi": 0.0,
        "zeta": {"fixed": 0.0, "nodes": 129, "scheme": "grid"},
        "delta_s": 1.0,
        "delta_i": 1.0,
    },
}

_SCENARIO_DEFAULTS: dict[str, dict] = {
    "dip": {
        "spectral": {"span_halfwidth": 4.0, "envelope": "unity"},
        "tau": {"start": 0.0, "stop": 3.0, "points": 241},
    },
    "maps": {"source": {"swap": "off"}},
    "intensities": {
        "source": {"swap": "off"},
        "spectral": {"filter_halfwidth": 1.0},
    },
    "filtered": {
        "source": {"swap": "off"},
        "spectral": {"filter_halfwidth": 1.0},
    },
    "g2": {},
    "dephasing": {
        "tau": {"start": 0.0, "stop": 3.0, "points": 241},
        "zeta_halfwidths": [k * math.pi / 8 for k in range(9)],
    },
    "classical": {
        "source": {"model": "classical"},
        "spectral": {"span_halfwidth": 4.0, "p": 2},
    },
}

# Keys replaced wholesale (not merged) when the user supplies them, because
# their variants are mutually exclusive.
_REPLACE_KEYS = {"tau", "zeta"}

_TOP_KEYS = {"scenario", "source", "spectral", "tau", "form", "seed", "format", "zeta_halfwidths"}
_SOURCE_KEYS = {
    "spdc": {"model", "phi_prime", "zeta", "delta", "swap"},
    "classical": {"model", "phi", "zeta", "delta_s", "delta_i"},
}
_SPECTRAL_KEYS = {"span_halfwidth", "nodes", "scheme", "envelope", "p", "filter_halfwidth"}
_TAU_KEYS = {"start", "stop", "points", "values"}
_ZETA_KEYS = {"fixed", "uniform", "nodes", "scheme"}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k not in _REPLACE_KEYS:
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def _check_keys(doc: dict, allowed: set[str], where: str) -> None:
    for k in doc:
        if k not in allowed:
            raise ConfigError(f"unknown key {k!r}", where)


def _require(cond: bool, message: str, key: str) -> None:
    if not cond:
        raise ConfigError(message, key)


def _zeta_from_doc(doc, key: str) -> ZetaSection:
    if isinstance(doc, (int, float, str)):
        return ZetaSection(kind="fixed", value=parse_angle(doc, key))
    if not isinstance(doc, dict):
        raise ConfigError(f"zeta must be a number, angle string, or object, got {doc!r}", key)
    _check_keys(doc, _ZETA_KEYS, key)
    has_fixed = "fixed" in doc
    has_uniform = "uniform" in doc
    _require(has_fixed != has_uniform, "specify exactly one of 'fixed' or 'uniform'", key)
    nodes = doc.get("nodes", 129)
    scheme = doc.get("scheme", "grid")
    _require(isinstance(nodes, int) and nodes >= 1, "zeta nodes must be a positive integer", f"{key}.nodes")
    _require(scheme in ("grid", "monte_carlo"), f"unknown zeta scheme {scheme!r}", f"{key}.scheme")
    if has_fixed:
        return ZetaSection("fixed", parse_angle(doc["fixed"], f"{key}.fixed"), nodes, scheme)
    a = parse_angle(doc["uniform"], f"{key}.uniform")
    _require(0.0 <= a <= math.pi, f"halfwidth must lie in [0, pi], got {a}", f"{key}.uniform")
    return ZetaSection("uniform", a, nodes, scheme)


def _source_from_doc(doc: dict) -> SourceSection:
    model = doc.get("model", "spdc")
    _require(model in ("spdc", "classical"), f"unknown source model {model!r}", "source.model")
    _check_keys(doc, _SOURCE_KEYS[model], "source")
    zeta = _zeta_from_doc(doc.get("zeta", 0.0), "source.zeta")
    if model == "spdc":
        swap = doc.get("swap", "exact_half")
        _require(
            swap in ("exact_half", "bernoulli", "off"),
            f"swap must be exact_half, bernoulli, or off, got {swap!r}",
            "source.swap",
        )
        delta = float(doc.get("delta", 1.0))
        _require(delta > 0.0, "delta must be > 0", "source.delta")
        return SourceSection(
            model="spdc",
            phi_prime=parse_angle(doc.get("phi_prime", math.pi / 2), "source.phi_prime"),
            zeta=zeta,
            delta=delta,
            swap=swap,
        )
    delta_s = float(doc.get("delta_s", 1.0))
    delta_i = float(doc.get("delta_i", 1.0))
    _require(delta_s > 0.0, "delta_s must be > 0", "source.delta_s")
    _require(delta_i > 0.0, "delta_i must be > 0", "source.delta_i")
    return SourceSection(
        model="classical",
        phi=parse_angle(doc.get("phi", 0.0), "source.phi"),
        zeta=zeta,
        delta_s=delta_s,
        delta_i=delta_i,
    )


def _spectral_from_doc(doc: dict) -> SpectralSection:
    _check_keys(doc, _SPECTRAL_KEYS, "spectral")
    env = doc.get("envelope", "gaussian")
    _require(env in _ENVELOPE_WORDS, f"envelope must be gaussian or unity, got {env!r}", "spectral.envelope")
    env = "unity" if _ENVELOPE_WORDS[env] == UNITY else "gaussian"
    p = doc.get("p", 1)
    _require(p in (1, 2), f"p must be 1 or 2, got {p!r}", "spectral.p")
    nodes = doc.get("nodes", 201)
    _require(isinstance(nodes, int) and nodes >= 2, "nodes must be an integer >= 2", "spectral.nodes")
    scheme = doc.get("scheme", "grid")
    _require(scheme in ("grid", "monte_carlo"), f"unknown grid scheme {scheme!r}", "spectral.scheme")
    span = float(doc.get("span_halfwidth", 2.0))
    _require(span > 0.0, "span_halfwidth must be > 0", "spectral.span_halfwidth")
    fhw = doc.get("filter_halfwidth", None)
    if fhw is not None:
        fhw = float(fhw)
        _require(fhw > 0.0, "filter_halfwidth must be > 0", "spectral.filter_halfwidth")
    return SpectralSection(span, nodes, scheme, env, p, fhw)


def _tau_from_doc(doc: dict) -> TauSection:
    _check_keys(doc, _TAU_KEYS, "tau")
    if "values" in doc:
        _require(
            not any(k in doc for k in ("start", "stop", "points")),
            "give either values or start/stop/points, not both",
            "tau",
        )
        vals = doc["values"]
        _require(isinstance(vals, (list, tuple)) and len(vals) > 0, "values must be a nonempty list", "tau.values")
        return TauSection(start=None, stop=None, points=None, values=tuple(float(v) for v in vals))
    start = float(doc.get("start", -3.0))
    stop = float(doc.get("stop", 3.0))
    points = doc.get("points", 241)
    _require(isinstance(points, int) and points >= 1, "points must be a positive integer", "tau.points")
    _require(stop > start, "stop must exceed start", "tau.stop")
    return TauSection(start=start, stop=stop, points=points, values=None)


def parse_config(
    text_or_path: str | Path | dict | None = None,
    scenario: str | None = None,
    overrides: dict | None = None,
) -> ScenarioConfig:
    """Resolve a config document (inline JSON, file path, dict, or nothing).

    ``scenario`` (e.g. the CLI subcommand) wins over the document's own
    scenario key; a conflict between the two is an error.  ``overrides`` is
    merged last (CLI flags).  Unknown keys anywhere are rejected.
    """
    if text_or_path is None or text_or_path == "":
        user: dict = {}
    elif isinstance(text_or_path, dict):
        user = copy.deepcopy(text_or_path)
    else:
        text = str(text_or_path)
        if not text.lstrip().startswith("{"):
            path = Path(text)
            if not path.exists():
                raise ConfigError(f"config file not found: {path}", "config")
            text = path.read_text(encoding="utf-8")
        try:
            user = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}", "config") from None
        if not isinstance(user, dict):
            raise ConfigError("config document must be a JSON object", "config")

    _check_keys(user, _TOP_KEYS, "config")
    doc_scenario = user.pop("scenario", None)
    if doc_scenario is not None and doc_scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {doc_scenario!r}", "scenario")
    if scenario is not None and doc_scenario is not None and scenario != doc_scenario:
        raise ConfigError(
            f"config names scenario {doc_scenario!r} but {scenario!r} was requested",
            "scenario",
        )
    name = scenario or doc_scenario or "dip"
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}", "scenario")

    scenario_defaults = _SCENARIO_DEFAULTS[name]

    # The source is merged separately: its default keys depend on the model,
    # so the model is resolved first and the matching defaults applied.
    user_source = user.pop("source", {})
    over = copy.deepcopy(overrides) if overrides else {}
    over_source = over.pop("source", {})
    if not isinstance(user_source, dict):
        raise ConfigError("source must be an object", "source")
    scen_source = scenario_defaults.get("source", {})
    model = (
        over_source.get("model")
        or user_source.get("model")
        or scen_source.get("model")
        or "spdc"
    )
    if model not in _MODEL_SOURCE_DEFAULTS:
        raise ConfigError(f"unknown source model {model!r}", "source.model")
    source_doc = copy.deepcopy(_MODEL_SOURCE_DEFAULTS[model])
    if scen_source.get("model", "spdc") == model:
        source_doc = _merge(source_doc, scen_source)
    source_doc = _merge(source_doc, user_source)
    source_doc = _merge(source_doc, over_source)

    doc = _merge(_BASE_DEFAULTS, {k: v for k, v in scenario_defaults.items() if k != "source"})
    doc = _merge(doc, user)
    if over:
        doc = _merge(doc, over)
    _check_keys(doc, _TOP_KEYS, "config")

    source = _source_from_doc(source_doc)
    if name == "classical" and source.model != "classical":
        raise ConfigError("scenario classical requires source.model classical", "source.model")
    if name == "dephasing" and source.model != "spdc":
        raise ConfigError("scenario dephasing requires source.model spdc", "source.model")

    fmt = doc.get("format", "csv")
    _require(fmt in ("csv", "json"), f"format must be csv or json, got {fmt!r}", "format")
    form = doc.get("form", "paper")
    _require(form in ("paper", "product"), f"form must be paper or product, got {form!r}", "form")
    seed = doc.get("seed", 12345)
    _require(isinstance(seed, int) and seed >= 0, "seed must be a nonnegative integer", "seed")

    halfwidths = doc.get("zeta_halfwidths", None)
    if halfwidths is not None:
        _require(name == "dephasing", "zeta_halfwidths applies only to the dephasing scenario", "zeta_halfwidths")
        _require(isinstance(halfwidths, (list, tuple)) and len(halfwidths) > 0, "must be a nonempty list", "zeta_halfwidths")
        parsed = tuple(parse_angle(a, "zeta_halfwidths") for a in halfwidths)
        for a in parsed:
            _require(0.0 <= a <= math.pi, f"halfwidths must lie in [0, pi], got {a}", "zeta_halfwidths")
        halfwidths = parsed

    return ScenarioConfig(
        scenario=name,
        source=source,
        spectral=_spectral_from_doc(doc.get("spectral", {})),
        tau=_tau_from_doc(doc.get("tau", {})),
        form=form,
        seed=seed,
        out_format=fmt,
        zeta_halfwidths=halfwidths,
    )


def serialize_config(cfg: ScenarioConfig) -> dict:
    """Canonical JSON-able form; parse_config(serialize_config(cfg)) == cfg."""
    zeta = {
        cfg.source.zeta.kind: cfg.source.zeta.value,
        "nodes": cfg.source.zeta.nodes,
        "scheme": cfg.source.zeta.scheme,
    }
    if cfg.source.model == "spdc":
        source = {
            "model": "spdc",
            "phi_prime": cfg.source.phi_prime,
            "zeta": zeta,
            "delta": cfg.source.delta,
            "swap": cfg.source.swap,
        }
    else:
        source = {
            "model": "classical",
            "phi": cfg.source.phi,
            "zeta": zeta,
            "delta_s": cfg.source.delta_s,
            "delta_i": cfg.source.delta_i,
        }
    tau: dict = (
        {"values": list(cfg.tau.values)}
        if cfg.tau.values is not None
        else {"start": cfg.tau.start, "stop": cfg.tau.stop, "points": cfg.tau.points}
    )
    doc = {
        "scenario": cfg.scenario,
        "source": source,
        "spectral": {
            "span_halfwidth": cfg.spectral.span_halfwidth,
            "nodes": cfg.spectral.nodes,
            "scheme": cfg.spectral.scheme,
            "envelope": cfg.spectral.envelope,
            "p": cfg.spectral.p,
            "filter_halfwidth": cfg.spectral.filter_halfwidth,
        },
        "tau": tau,
        "form": cfg.form,
        "seed": cfg.seed,
        "format": cfg.out_format,
    }
    if cfg.zeta_halfwidths is not None:
        doc["zeta_halfwidths"] = list(cfg.zeta_halfwidths)
    return doc


@dataclass(frozen=True, eq=False)
class Table:
    """One named, column-oriented dataset; ``gaps`` masks cells emitted as empty."""

    name: str
    columns: tuple[str, ...]
    data: tuple[np.ndarray, ...]
    gaps: dict[str, np.ndarray] | None = None


@dataclass(frozen=True, eq=False)
class ScenarioOutput:
    scenario: str
    metadata: dict
    tables: tuple[Table, ...]
    wall_time_s: float


def _derived_seeds(seed: int) -> tuple[int, int, int]:
    state = np.random.SeedSequence(seed).generate_state(3, np.uint64)
    return int(state[0]), int(state[1]), int(state[2])


def _resolve_runtime(cfg: ScenarioConfig):
    """Materialize source, grids, envelope, tau grid, and derived seeds."""
    grid_seed, zeta_seed, swap_seed = _derived_seeds(cfg.seed)
    zeta = cfg.source.zeta.to_model()
    if cfg.source.model == "spdc":
        src: ClassicalSource | SpdcSource = SpdcSource(
            phi_prime=cfg.source.phi_prime,
            zeta=zeta,
            delta=cfg.source.delta,
            swap=cfg.source.swap,
            swap_seed=swap_seed if cfg.source.swap == "bernoulli" else None,
        )
        width = cfg.source.delta
    else:
        src = ClassicalSource(
            phi=cfg.source.phi,
            zeta=zeta,
            delta_s=cfg.source.delta_s,
            delta_i=cfg.source.delta_i,
        )
        width = src.delta_is
    profile = SpectralProfile(delta=width, span_halfwidth=cfg.spectral.span_halfwidth)
    grid = build_grid(
        profile,
        cfg.spectral.nodes,
        scheme=cfg.spectral.scheme,
        seed=grid_seed if cfg.spectral.scheme == "monte_carlo" else None,
    )
    filtered = None
    if cfg.spectral.filter_halfwidth is not None:
        filtered = filter_grid(grid, cfg.spectral.filter_halfwidth * width)
    env = Envelope(kind=_ENVELOPE_WORDS[cfg.spectral.envelope], exponent_p=cfg.spectral.p)
    taus = cfg.tau.to_grid()
    mc_zeta = zeta.kind == "uniform" and zeta.scheme == "monte_carlo"
    return src, grid, filtered, env, taus, (zeta_seed if mc_zeta else None)


def _curve_table(name: str, res: CorrelationResult) -> Table:
    return Table(
        name=name,
        columns=("tau", "r_hat", "g2"),
        data=(res.tau, res.r_hat, res.g2),
        gaps={"g2": ~res.g2_defined},
    )


def _long_table(name: str, res: CorrelationResult) -> Table:
    nt, nk = res.r_map.shape
    return Table(
        name=name,
        columns=("tau", "delta_f", "r_ab", "i_a", "i_b"),
        data=(
            np.repeat(res.tau, nk),
            np.tile(res.delta_f, nt),
            res.r_map.ravel(),
            res.ia_map.ravel(),
            res.ib_map.ravel(),
        ),
    )


def run_scenario(cfg: ScenarioConfig) -> ScenarioOutput:
    """Execute a resolved config and return its tables plus provenance metadata."""
    t0 = time.perf_counter()
    src, grid, filtered, env, taus, zeta_seed = _resolve_runtime(cfg)

    if cfg.scenario in ("dip", "g2"):
        if not taus.has_zero():
            raise ConfigError("tau grid must include 0 for dip scenarios", "tau")
        res = evaluate(src, grid, env, taus, form=cfg.form, zeta_seed=zeta_seed)
        tables = (_curve_table(cfg.scenario, res),)
    elif cfg.scenario == "classical":
        res = classical_baseline(src, grid, env, taus, form=cfg.form, zeta_seed=zeta_seed)
        tables = (_curve_table("classical", res),)
    elif cfg.scenario == "maps":
        res = evaluate(src, grid, env, taus, form=cfg.form, zeta_seed=zeta_seed)
        tables = (_long_table("maps", res),)
    elif cfg.scenario == "filtered":
        use = filtered if filtered is not None else grid
        res = evaluate(src, use, env, taus, form=cfg.form, zeta_seed=zeta_seed)
        tables = (_long_table("filtered", res),)
    elif cfg.scenario == "intensities":
        full = evaluate(src, grid, env, taus, form=cfg.form, zeta_seed=zeta_seed)
        cut = evaluate(
            src,
            filtered if filtered is not None else filter_grid(grid, 1.0),
            env,
            taus,
            form=cfg.form,
            zeta_seed=zeta_seed,
        )
        tables = (
            Table(
                name="intensities",
                columns=(
                    "tau",
                    "ia_mean_full",
                    "ib_mean_full",
                    "ia_mean_filtered",
                    "ib_mean_filtered",
                ),
                data=(full.tau, full.ia_mean, full.ib_mean, cut.ia_mean, cut.ib_mean),
            ),
        )
    elif cfg.scenario == "dephasing":
        if not taus.has_zero():
            raise ConfigError("tau grid must include 0 for the dephasing sweep", "tau")
        halfwidths = cfg.zeta_halfwidths or ()
        sweep = dephasing_sweep(
            src, halfwidths, grid, env, taus, form=cfg.form, zeta_seed=zeta_seed
        )
        zero = int(np.flatnonzero(taus.values == 0.0)[0])
        summary = Table(
            name="dephasing_summary",
            columns=("zeta_halfwidth", "r_hat_zero"),
            data=(
                np.array([a for a, _ in sweep]),
                np.array([res.r_hat[zero] for _, res in sweep]),
            ),
        )
        curves = tuple(
            _curve_table(f"dephasing_curve_{k:02d}", res)
            for k, (_, res) in enumerate(sweep)
        )
        tables = (summary,) + curves
    else:  # pragma: no cover - parse_config guards the scenario name
        raise ConfigError(f"unknown scenario {cfg.scenario!r}", "scenario")

    metadata = {
        "scenario": cfg.scenario,
        "config": serialize_config(cfg),
        "seed": cfg.seed,
        "version": __version__,
    }
    return ScenarioOutput(
        scenario=cfg.scenario,
        metadata=metadata,
        tables=tables,
        wall_time_s=time.perf_counter() - t0,
    )


def _format_cell(value: float) -> str:
    return f"{value:.17g}"


def write_output(output: ScenarioOutput, out_dir: str | Path, fmt: str | None = None) -> list[Path]:
    """Write tables to ``out_dir`` as CSV files or one JSON document.

    Wall time is deliberately not serialized: identical configs must yield
    byte-identical files.
    """
    fmt = fmt or "csv"
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = json.dumps(output.metadata, sort_keys=True, separators=(",", ":"))
    written: list[Path] = []
    if fmt == "csv":
        for table in output.tables:
            path = out_dir / f"{table.name}.csv"
            lines = [f"# {header}", ",".join(table.columns)]
            gaps = table.gaps or {}
            masks = [gaps.get(c) for c in table.columns]
            nrows = table.data[0].size
            for i in range(nrows):
                cells = []
                for col, mask in zip(table.data, masks):
                    if mask is not None and mask[i]:
                        cells.append("")
                    else:
                        cells.append(_format_cell(float(col[i])))
                lines.append(",".join(cells))
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            written.append(path)
        return written
    if fmt != "json":
        raise ConfigError(f"format must be csv or json, got {fmt!r}", "format")
    doc: dict = {"metadata": output.metadata, "tables": {}}
    for table in output.tables:
        gaps = table.gaps or {}
        masks = [gaps.get(c) for c in table.columns]
        rows = []
        for i in range(table.data[0].size):
            row = []
            for col, mask in zip(table.data, masks):
                row.append(None if (mask is not None and mask[i]) else float(col[i]))
            rows.append(row)
        doc["tables"][table.name] = {"columns": list(table.columns), "rows": rows}
    path = out_dir / f"{output.scenario}.json"
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return [path]
