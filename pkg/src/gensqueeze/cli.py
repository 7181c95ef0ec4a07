"""Command-line front end: verification suite, entropy sweeps, Wigner grids
and parameter composition.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .amplifier import (
    AmplifierConfig,
    DetuningWarning,
    check_constraints,
    compare_up_to_phase,
    factor_evolution,
    fock_factorized,
    heisenberg_solution,
)
from .errors import BranchAmbiguity, CompositionSingularity, DegenerateDecomposition, GenSqueezeError
from .fock import (
    FockRep,
    RepKind,
    characteristic_value,
    converged_block,
    evolve,
    expectation,
    exponentiate_params,
    factor_sequence,
    propagator,
    refine_interior,
)
from .phase_space import PhasePoint, Role, characteristic_t, wigner_grid
from .states import Coherent, InitialState, Number, Thermal
from .su11 import (
    AlgebraParams,
    UnitaryParams,
    compose,
    compose_factors,
    decompose_antinormal,
    decompose_normal,
    is_unitary,
    matrix_rep,
)
from .wehrl import entropy_closed, entropy_report_numeric

SIG_DIGITS = 12
MAX_TWO_MODE_CUTOFF = 40


class ConfigError(ValueError):
    """Invalid or unreadable run configuration."""


# -- configuration -------------------------------------------------------------


def _complex(value, what: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and set(value) <= {"re", "im"}:
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            pass
    raise ConfigError(f"{what}: cannot read {value!r} as a complex number")


def _state_from(obj: dict) -> InitialState:
    kind = str(obj.get("kind", "")).lower()
    try:
        if kind == "coherent":
            return Coherent(_complex(obj.get("zeta_a", 0), "zeta_a"), _complex(obj.get("zeta_b", 0), "zeta_b"))
        if kind == "number":
            return Number(obj.get("n_a", 0), obj.get("n_b", 0))
        if kind == "thermal":
            return Thermal(obj.get("nbar_a", 0.0), obj.get("nbar_b", 0.0))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"state: {exc}") from exc
    raise ConfigError(f"state.kind must be coherent, number or thermal, got {kind!r}")


@dataclass(frozen=True)
class RunConfig:
    amplifier: AmplifierConfig
    state: InitialState
    time_grid: tuple[float, float, int] = (0.0, 1.0, 5)
    cutoff: int = 30
    tolerances: dict = field(default_factory=dict)
    output: str | None = None
    format: str = "csv"
    seed: int = 0

    def times(self) -> np.ndarray:
        t0, t1, steps = self.time_grid
        return np.linspace(t0, t1, steps + 1)


DEFAULT_CONFIG = {
    "amplifier": {"omega_a": 1.0, "omega_b": 1.5, "kappa": 0.3, "delta": 0.05},
    "state": {"kind": "coherent", "zeta_a": [0.3, 0.1], "zeta_b": [0.0, -0.2]},
    "time_grid": [0.0, 1.5, 3],
    "cutoff": 30,
    "tolerances": {},
    "output": {"path": None, "format": "csv"},
}


def load_config(source=None, overrides: dict | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from a JSON path, a dict or the defaults."""
    if source is None:
        raw = json.loads(json.dumps(DEFAULT_CONFIG))
    elif isinstance(source, dict):
        raw = source
    else:
        try:
            raw = json.loads(Path(source).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {source}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    overrides = overrides or {}
    try:
        amp = raw.get("amplifier", DEFAULT_CONFIG["amplifier"])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DetuningWarning)
            amplifier = AmplifierConfig(
                float(amp["omega_a"]),
                float(amp["omega_b"]),
                _complex(amp.get("kappa", 0.0), "kappa"),
                float(amp.get("delta", 0.0)),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"amplifier: {exc}") from exc
    state = _state_from(raw.get("state", DEFAULT_CONFIG["state"]))
    grid = raw.get("time_grid", DEFAULT_CONFIG["time_grid"])
    try:
        t0, t1, steps = float(grid[0]), float(grid[1]), int(grid[2])
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"time_grid must be [t0, t1, steps]: {exc}") from exc
    if not (0 <= t0 <= t1 and steps >= 1):
        raise ConfigError("time_grid needs 0 <= t0 <= t1 and steps >= 1")
    cutoff = overrides.get("cutoff") or raw.get("cutoff", 30)
    if not isinstance(cutoff, int) or not 2 <= cutoff <= MAX_TWO_MODE_CUTOFF:
        raise ConfigError(f"cutoff must be an integer in [2, {MAX_TWO_MODE_CUTOFF}]")
    tolerances = raw.get("tolerances", {}) or {}
    if not isinstance(tolerances, dict) or not all(isinstance(v, (int, float)) for v in tolerances.values()):
        raise ConfigError("tolerances must map check names to numbers")
    out = raw.get("output", {}) or {}
    path = overrides.get("out") or out.get("path")
    fmt = overrides.get("format") or out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("output format must be csv or json")
    seed = overrides.get("seed")
    return RunConfig(
        amplifier=amplifier,
        state=state,
        time_grid=(t0, t1, steps),
        cutoff=cutoff,
        tolerances={str(k): float(v) for k, v in tolerances.items()},
        output=path,
        format=fmt,
        seed=int(seed) if seed is not None else int(raw.get("seed", 0)),
    )


# -- table output ----------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{SIG_DIGITS}g}"
    return str(value)


def render_table(fields: list[str], rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        clean = [{k: (json.loads(_fmt(r[k])) if isinstance(r[k], (float, np.floating, int, bool)) else r[k]) for k in fields} for r in rows]
        return json.dumps(clean, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in rows:
        writer.writerow([_fmt(r[k]) for k in fields])
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- verification suite --------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    run: Callable[[RunConfig, np.random.Generator], float]


def _unitary_draw(rng, radius=1.0) -> AlgebraParams:
    v = rng.normal(size=3)
    v *= radius * rng.uniform() ** (1 / 3) / np.linalg.norm(v)
    return UnitaryParams((v[0] + 1j * v[1]) / math.sqrt(2), v[2]).to_algebra()


def _check_composition(cfg: RunConfig, rng) -> float:
    worst = 0.0
    for _ in range(50):
        p, q = _unitary_draw(rng), _unitary_draw(rng)
        sigma = compose(p, q)
        prod = (matrix_rep(p) @ matrix_rep(q)).array
        worst = max(worst, float(np.max(np.abs(matrix_rep(sigma).array - prod))))
    return worst


def _check_unitary_closure(cfg: RunConfig, rng) -> float:
    worst = 0.0
    for _ in range(50):
        s = compose(_unitary_draw(rng), _unitary_draw(rng))
        worst = max(worst, abs(s.omega_plus + s.omega_minus.conjugate()), abs(s.omega_zero.real))
    return worst


def _check_decomposition(cfg: RunConfig, rng) -> float:
    rep = FockRep(RepKind.ONE_MODE, 2 * cfg.cutoff)
    worst = 0.0
    for _ in range(5):
        p = _unitary_draw(rng, 0.5)
        bound = refine_interior([[p]], rep, 1e-10)
        target = exponentiate_params(p, rep).block(bound)
        for factors in (decompose_normal(p), decompose_antinormal(p)):
            # antinormal order sums over levels above the block; grow the cutoff until it settles
            got = converged_block(factor_sequence(factors), rep, bound, 1e-10)
            worst = max(worst, float(np.linalg.norm(got - target) / np.linalg.norm(target)))
    return worst


def _check_constraints(cfg: RunConfig, rng) -> float:
    return max(float(np.max(check_constraints(heisenberg_solution(cfg.amplifier, t)))) for t in cfg.times())


def _check_jacobian(cfg: RunConfig, rng) -> float:
    return max(abs(abs(np.linalg.det(heisenberg_solution(cfg.amplifier, t).matrix)) - 1) for t in cfg.times())


def _check_factorization(cfg: RunConfig, rng) -> float:
    rep = FockRep(RepKind.TWO_MODE, cfg.cutoff)
    bound = max(0, cfg.cutoff // 2 - 1)
    t = cfg.time_grid[1]
    prop = propagator(cfg.amplifier, t, rep, interior=bound, columns="interior")
    fact = fock_factorized(factor_evolution(cfg.amplifier, t), rep)
    err, _ = compare_up_to_phase(prop.block(bound), fact.block(bound))
    return err


def _check_conservation(cfg: RunConfig, rng) -> float:
    rep = FockRep(RepKind.TWO_MODE, cfg.cutoff)
    n = rep.photon_numbers()
    diff = np.diag(n[:, 0] - n[:, 1]).astype(complex)
    values = [expectation(evolve(cfg.amplifier, t, cfg.state, rep), diff).real for t in cfg.times()]
    return float(np.max(np.abs(np.array(values) - values[0])))


def _check_characteristic(cfg: RunConfig, rng) -> float:
    rep = FockRep(RepKind.TWO_MODE, cfg.cutoff)
    t = cfg.time_grid[1]
    ms = evolve(cfg.amplifier, t, cfg.state, rep)
    worst = 0.0
    for _ in range(5):
        ga, gb = (complex(*rng.normal(scale=0.5, size=2)) for _ in range(2))
        closed = characteristic_t(cfg.state, cfg.amplifier, t, PhasePoint(ga, gb, Role.G))
        worst = max(worst, abs(closed - characteristic_value(ms, ga, gb)))
    return worst


def _entropy_states(cfg: RunConfig) -> bool:
    return isinstance(cfg.state, (Coherent, Thermal))


def _check_entropy(cfg: RunConfig, rng) -> float:
    if not _entropy_states(cfg):
        return 0.0
    worst = 0.0
    for t in cfg.times():
        a = entropy_closed(cfg.amplifier, cfg.state, t).as_dict()
        b = entropy_report_numeric(cfg.amplifier, cfg.state, t).as_dict()
        worst = max(worst, max(abs(a[k] - b[k]) for k in a))
    return worst


def _check_inequalities(cfg: RunConfig, rng) -> float:
    if not _entropy_states(cfg):
        return 0.0
    worst = 0.0
    for t in cfg.times():
        r = entropy_closed(cfg.amplifier, cfg.state, t)
        worst = max(
            worst,
            abs(r.partial_a - r.partial_b) - r.joint,
            r.joint - r.partial_a - r.partial_b,
            abs(r.cond_a + r.partial_a - r.cond_b - r.partial_b),
            r.cond_a - r.partial_b,
            r.cond_b - r.partial_a,
        )
    return max(worst, 0.0)


CHECKS = [
    Check("algebra.composition", 1e-10, _check_composition),
    Check("algebra.unitary_closure", 1e-10, _check_unitary_closure),
    Check("algebra.decomposition", 1e-8, _check_decomposition),
    Check("amplifier.constraints", 1e-12, _check_constraints),
    Check("amplifier.jacobian", 1e-10, _check_jacobian),
    Check("amplifier.factorization", 1e-6, _check_factorization),
    Check("amplifier.conservation", 1e-8, _check_conservation),
    Check("phase_space.characteristic", 1e-5, _check_characteristic),
    Check("entropy.closed_vs_numeric", 1e-6, _check_entropy),
    Check("entropy.inequalities", 1e-9, _check_inequalities),
]


def select_checks(selected: list[str] | None = None) -> list[Check]:
    """Checks named exactly or by their dotted group (``algebra``, ``entropy``)."""
    if not selected:
        return list(CHECKS)
    chosen = [c for c in CHECKS if any(c.name == s or c.name.startswith(s + ".") for s in selected)]
    if not chosen:
        raise ConfigError(f"no checks match {selected}")
    return chosen


def run_checks(cfg: RunConfig, selected: list[str] | None = None, echo=print) -> list[dict]:
    checks = select_checks(selected)
    echo(f"seed={cfg.seed}")
    rows = []
    for check in checks:
        tol = cfg.tolerances.get(check.name, check.tolerance)
        rng = np.random.default_rng([cfg.seed, len(rows)])
        try:
            residual = float(check.run(cfg, rng))
            passed, note = residual <= tol, ""
        except GenSqueezeError as exc:
            residual, passed, note = float("nan"), False, f"{type(exc).__name__}: {exc}"
        status = "PASS" if passed else "FAIL"
        echo(f"{status} {check.name} residual={_fmt(residual)} tol={_fmt(tol)}" + (f" ({note})" if note else ""))
        rows.append({"check": check.name, "residual": residual, "tolerance": tol, "passed": passed, "note": note})
    return rows


# -- commands ------------------------------------------------------------------------


def cmd_verify(cfg: RunConfig, checks: list[str] | None = None) -> int:
    rows = run_checks(cfg, checks)
    if cfg.output:
        _emit(render_table(["check", "residual", "tolerance", "passed", "note"], rows, cfg.format), cfg.output)
    failed = [r["check"] for r in rows if not r["passed"]]
    if failed:
        print("failed: " + ", ".join(failed))
        return 1
    return 0


SWEEP_FIELDS = ["t", "E_joint", "E_A", "E_B", "cond_A", "cond_B", "C_closed", "C_numeric"]


def sweep_rows(cfg: RunConfig, workers: int = 4) -> list[dict]:
    if not _entropy_states(cfg):
        raise ConfigError("sweeps need a coherent or thermal state")

    def row(t: float) -> dict:
        closed = entropy_closed(cfg.amplifier, cfg.state, t)
        numeric = entropy_report_numeric(cfg.amplifier, cfg.state, t)
        return {
            "t": float(t),
            "E_joint": closed.joint,
            "E_A": closed.partial_a,
            "E_B": closed.partial_b,
            "cond_A": closed.cond_a,
            "cond_B": closed.cond_b,
            "C_closed": closed.correlation,
            "C_numeric": numeric.correlation,
        }

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row, cfg.times()))


def cmd_sweep(cfg: RunConfig) -> int:
    _emit(render_table(SWEEP_FIELDS, sweep_rows(cfg), cfg.format), cfg.output)
    return 0


COORDS = ("re_a", "im_a", "re_b", "im_b")


def wigner_rows(cfg: RunConfig, axes: tuple[str, str], fixed: dict, lo: float, hi: float, points: int, t: float) -> list[dict]:
    if len(set(axes)) != 2 or not set(axes) <= set(COORDS):
        raise ConfigError(f"slice axes must be two distinct names from {COORDS}")
    if set(fixed) - set(COORDS) or set(fixed) & set(axes):
        raise ConfigError("fixed coordinates must be the two non-slice axes")
    if points < 1 or not lo <= hi:
        raise ConfigError("grid needs points >= 1 and lo <= hi")
    line = np.linspace(lo, hi, points)
    u, v = np.meshgrid(line, line, indexing="ij")
    coords = {c: np.full(u.shape, float(fixed.get(c, 0.0))) for c in COORDS}
    coords[axes[0]], coords[axes[1]] = u, v
    w = wigner_grid(
        cfg.state, cfg.amplifier, t, coords["re_a"] + 1j * coords["im_a"], coords["re_b"] + 1j * coords["im_b"]
    )
    rows = []
    for idx in np.ndindex(u.shape):
        row = {c: float(coords[c][idx]) for c in COORDS}
        row["w"] = float(w[idx])
        rows.append(row)
    return rows


def cmd_wigner_grid(cfg: RunConfig, axes, fixed, lo, hi, points, t) -> int:
    rows = wigner_rows(cfg, axes, fixed, lo, hi, points, t)
    _emit(render_table(list(COORDS) + ["w"], rows, cfg.format), cfg.output)
    return 0


def _params_from(obj, what: str) -> AlgebraParams:
    if isinstance(obj, dict):
        try:
            return AlgebraParams(*(_complex(obj[k], f"{what}.{k}") for k in ("omega_plus", "omega_zero", "omega_minus")))
        except KeyError as exc:
            raise ConfigError(f"{what} misses {exc}") from exc
    if isinstance(obj, (list, tuple)) and len(obj) == 3:
        return AlgebraParams(*(_complex(x, what) for x in obj))
    raise ConfigError(f"{what} must be an object or a 3-list")


def _cjson(z: complex) -> list[float]:
    return [float(_fmt(z.real)), float(_fmt(z.imag))]


def cmd_compose(path: str, out: str | None = None) -> int:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read params file {path}: {exc}") from exc
    if not isinstance(raw, dict) or "p1" not in raw or "p2" not in raw:
        raise ConfigError("params file needs keys p1 and p2")
    p1, p2 = _params_from(raw["p1"], "p1"), _params_from(raw["p2"], "p2")
    notes = []
    try:
        compose_factors(p1, p2)
    except (CompositionSingularity, DegenerateDecomposition) as exc:
        notes.append(f"factor route singular ({type(exc).__name__}); result from the matrix backend")
    try:
        sigma = compose(p1, p2)
    except BranchAmbiguity as exc:
        print(f"BranchAmbiguity: {exc}")
        return 1
    result = {
        "sigma": {
            "omega_plus": _cjson(sigma.omega_plus),
            "omega_zero": _cjson(sigma.omega_zero),
            "omega_minus": _cjson(sigma.omega_minus),
        },
        "unitary": is_unitary(sigma, 1e-10),
        "notes": notes,
    }
    _emit(json.dumps(result, indent=2) + "\n", out)
    return 0


# -- entry point --------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--cutoff", type=int, help="per-mode Fock cutoff")
    common.add_argument("--seed", type=int, help="seed for randomized checks")

    parser = argparse.ArgumentParser(prog="gensqueeze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", parents=[common], help="run the oracle and invariant checks")
    verify.add_argument("--checks", help="comma-separated check names or prefixes")
    sub.add_parser("sweep", parents=[common], help="entropy and correlation over the time grid")
    grid = sub.add_parser("wigner-grid", parents=[common], help="Wigner function on a 2D slice")
    grid.add_argument("--axes", default="re_a,re_b", help="two of re_a,im_a,re_b,im_b")
    grid.add_argument("--fixed", default="", help="values of the other two, e.g. im_a=0,im_b=0")
    grid.add_argument("--range", nargs=2, type=float, default=(-2.0, 2.0), metavar=("LO", "HI"))
    grid.add_argument("--points", type=int, default=21)
    grid.add_argument("--time", type=float, help="evaluation time (default: start of the time grid)")
    comp = sub.add_parser("compose", help="compose two parameter triples")
    comp.add_argument("params", help="JSON file with p1 and p2")
    comp.add_argument("--out")
    return parser


def _parse_fixed(spec: str) -> dict:
    out = {}
    for item in filter(None, (s.strip() for s in spec.split(","))):
        name, _, value = item.partition("=")
        try:
            out[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"bad --fixed entry {item!r}") from exc
    return out


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "compose":
            return cmd_compose(args.params, args.out)
        overrides = {"cutoff": args.cutoff, "out": args.out, "format": args.format, "seed": args.seed}
        cfg = load_config(args.config, overrides)
        if args.command == "verify":
            checks = [c.strip() for c in args.checks.split(",")] if args.checks else None
            return cmd_verify(cfg, checks)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "wigner-grid":
            axes = tuple(a.strip() for a in args.axes.split(","))
            t = cfg.time_grid[0] if args.time is None else args.time
            return cmd_wigner_grid(cfg, axes, _parse_fixed(args.fixed), *args.range, args.points, t)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
