"""Command-line interface: spectra, wavefunctions, potentials, verification.

Commands
--------
spectrum      solved levels (n, E, q-root), closed forms when available,
              optional finite-difference cross-check column
wavefunction  one CSV per level (x, psi[, psi_normalized]) plus a node-count
              sidecar JSON
potential     tabulated V(x) for a transform case; generated term list for
              the non-sextic cases
verify        the full property suite as a machine-readable JSON verdict
figures       reference-well data files: potential with level lines and the
              four lowest wavefunctions

Parameters are accepted in exactly one of two forms: the well side
(-a, -s, optional -b, with -M) or the equation side (--gamma, --delta,
--epsilon, --alpha, with -M where an expansion order is needed).

Output conventions: JSON (default) or CSV with a header row, 17 significant
digits, LF line endings; deterministic for identical flags. Exit codes:
0 success, 2 usage or domain errors, 3 numerical failures. The environment
variable HEUN_SEXTIC_TOL overrides the default verification tolerance.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, HeunSexticError, NotQesError, UnsupportedError
from .oracle import fd_eigenvalues, qes_discretization
from .params import (
    BheParams,
    QesParams,
    TransformCase,
    bhe_to_qes,
    potential_from_bhe,
    qes_sextic_coeffs,
    qes_to_bhe,
    potential_eval,
)
from .spectrum import closed_form_energies, solve_spectrum
from .verify import DEFAULT_TOL, run_suite
from .wavefunction import build_wavefunction, count_nodes, eval_wavefunction

__all__ = ["RunConfig", "main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_COMMANDS = ("spectrum", "wavefunction", "potential", "verify", "figures")

#: Reference well (a=1, b=0, s=1, M=3) used by the figures command.
_REFERENCE_QES = QesParams(a=1.0, b=0.0, s=1.0, M=3)


@dataclass(frozen=True)
class RunConfig:
    """Resolved invocation: command, parameters, output and grid controls."""

    command: str
    parametrization: "str | None" = None
    bhe: "BheParams | None" = None
    qes: "QesParams | None" = None
    M: "int | None" = None
    fmt: str = "json"
    out: "str | None" = None
    x_min: float = 0.05
    x_max: float = 4.0
    points: int = 801
    levels: "tuple[int, ...] | None" = None
    normalize: bool = False
    with_oracle: bool = False
    case_m: float = 0.5
    sigma: float = 1.0
    x0: float = 0.0
    q: float = 0.0
    tol: "float | None" = None
    seed: "int | None" = None
    inject_wrong_centrifugal: bool = False

    def __post_init__(self) -> None:
        if self.command not in _COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.command in ("spectrum", "wavefunction", "potential"):
            if self.parametrization not in ("qes", "bhe") or self.bhe is None:
                raise DomainError("exactly one parametrization must be supplied")
        if self.M is not None and self.M < 0:
            raise DomainError(f"M must be non-negative, got {self.M}")
        if self.fmt not in ("json", "csv"):
            raise DomainError(f"format must be json or csv, got {self.fmt!r}")
        if not self.x_min < self.x_max:
            raise DomainError("grid requires x_min < x_max")
        if self.points < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.points}")


def _fmt(value: float) -> str:
    """17 significant digits: lossless for binary64 reimport."""
    return format(float(value), ".17g")


def _emit_json(obj: dict, out: "str | None") -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _emit_csv(
    header: "list[str]",
    rows: "list[list[object]]",
    out: "str | None",
    preamble: "list[str] | None" = None,
) -> None:
    lines = [f"# {note}" for note in (preamble or [])]
    lines.append(",".join(header))
    for row in rows:
        lines.append(
            ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row)
        )
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


def _add_param_options(p: argparse.ArgumentParser) -> None:
    well = p.add_argument_group("well-side parameters")
    well.add_argument("-a", type=float, default=None, help="sextic strength, a > 0")
    well.add_argument("-b", type=float, default=None, help="quartic control (default 0)")
    well.add_argument("-s", type=float, default=None, help="centrifugal label s")
    eq = p.add_argument_group("equation-side parameters")
    eq.add_argument("--gamma", type=float, default=None)
    eq.add_argument("--delta", type=float, default=None)
    eq.add_argument("--epsilon", type=float, default=None)
    eq.add_argument("--alpha", type=float, default=None)
    p.add_argument("-M", type=int, default=None, help="expansion order (levels = M+1)")


def _add_output_options(p: argparse.ArgumentParser, points: int,
                        x_min: float, x_max: float) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--x-min", type=float, default=x_min)
    p.add_argument("--x-max", type=float, default=x_max)
    p.add_argument("--points", type=int, default=points)


def _parse_levels(text: "str | None") -> "tuple[int, ...] | None":
    if text is None:
        return None
    try:
        levels = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise DomainError(f"bad --levels value {text!r}") from exc
    if not levels or any(n < 0 for n in levels):
        raise DomainError(f"bad --levels value {text!r}")
    return levels


def _resolve_params(ns: argparse.Namespace) -> tuple[str, BheParams, "QesParams | None"]:
    """Apply the exactly-one-parametrization rule and build both views."""
    qes_given = any(getattr(ns, k, None) is not None for k in ("a", "b", "s"))
    bhe_given = any(
        getattr(ns, k, None) is not None
        for k in ("gamma", "delta", "epsilon", "alpha")
    )
    if qes_given == bhe_given:
        raise DomainError(
            "supply exactly one parametrization: -a/-s[/-b] or "
            "--gamma/--delta/--epsilon/--alpha"
        )
    if qes_given:
        if ns.a is None or ns.s is None:
            raise DomainError("well-side parametrization needs both -a and -s")
        if getattr(ns, "M", None) is None:
            raise DomainError("well-side parametrization needs -M")
        qes = QesParams(a=ns.a, b=ns.b if ns.b is not None else 0.0, s=ns.s, M=ns.M)
        return "qes", qes_to_bhe(qes), qes
    missing = [
        k for k in ("gamma", "delta", "epsilon", "alpha")
        if getattr(ns, k, None) is None
    ]
    if missing:
        raise DomainError(
            "equation-side parametrization needs --gamma, --delta, --epsilon "
            f"and --alpha (missing: {', '.join('--' + k for k in missing)})"
        )
    bhe = BheParams(gamma=ns.gamma, delta=ns.delta, epsilon=ns.epsilon, alpha=ns.alpha)
    try:
        qes = bhe_to_qes(bhe)
    except (NotQesError, DomainError):
        qes = None
    return "bhe", bhe, qes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heun-sextic",
        description="Sextic-oscillator solvable levels and cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="solved levels and diagnostics")
    _add_param_options(p_spec)
    p_spec.add_argument("--format", choices=("json", "csv"), default="json")
    p_spec.add_argument("--out", default=None)
    p_spec.add_argument(
        "--verify", action="store_true",
        help="add a finite-difference cross-check column",
    )
    p_spec.add_argument("--n-points", type=int, default=4000,
                        help="cross-check grid resolution")

    p_wf = sub.add_parser("wavefunction", help="per-level wavefunction tables")
    _add_param_options(p_wf)
    _add_output_options(p_wf, points=801, x_min=0.0, x_max=4.0)
    p_wf.add_argument("--levels", default=None,
                      help="comma-separated level indices (default: all)")
    p_wf.add_argument("--normalize", action="store_true",
                      help="append a numerically L2-normalized column")

    p_pot = sub.add_parser("potential", help="tabulated potential for a case")
    _add_param_options(p_pot)
    _add_output_options(p_pot, points=500, x_min=0.05, x_max=3.0)
    p_pot.add_argument("--case", type=float, default=0.5, dest="case_m",
                       help="transform exponent m (default 1/2: sextic)")
    p_pot.add_argument("--sigma", type=float, default=1.0)
    p_pot.add_argument("--x0", type=float, default=0.0)
    p_pot.add_argument("--q", type=float, default=0.0,
                       help="accessory parameter (enters V for m != 1/2)")

    p_ver = sub.add_parser("verify", help="run the full property suite")
    p_ver.add_argument("--tol", type=float, default=None,
                       help="verification tolerance (default: "
                            "HEUN_SEXTIC_TOL or 1e-8)")
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--out", default=None)
    p_ver.add_argument("--inject-wrong-centrifugal", action="store_true",
                       help="negative control: mis-set the x^-2 coefficient "
                            "and watch the residual check fail")

    p_fig = sub.add_parser("figures", help="reference-well data files")
    p_fig.add_argument("--out", default="figures")

    return parser


def build_config(ns: argparse.Namespace) -> RunConfig:
    kwargs: dict = {"command": ns.command}
    if ns.command in ("spectrum", "wavefunction", "potential"):
        parametrization, bhe, qes = _resolve_params(ns)
        kwargs.update(
            parametrization=parametrization, bhe=bhe, qes=qes,
            M=qes.M if qes is not None and parametrization == "qes" else ns.M,
            fmt=ns.format, out=ns.out,
        )
    if ns.command == "spectrum":
        kwargs.update(with_oracle=ns.verify, points=ns.n_points,
                      x_min=0.0, x_max=1.0)
    if ns.command in ("wavefunction", "potential"):
        kwargs.update(x_min=ns.x_min, x_max=ns.x_max, points=ns.points)
    if ns.command == "wavefunction":
        kwargs.update(levels=_parse_levels(ns.levels), normalize=ns.normalize)
    if ns.command == "potential":
        kwargs.update(case_m=ns.case_m, sigma=ns.sigma, x0=ns.x0, q=ns.q)
    if ns.command == "verify":
        tol = ns.tol
        if tol is None:
            env = os.environ.get("HEUN_SEXTIC_TOL")
            tol = float(env) if env else None
        kwargs.update(tol=tol, seed=ns.seed, out=ns.out,
                      inject_wrong_centrifugal=ns.inject_wrong_centrifugal)
    if ns.command == "figures":
        kwargs.update(out=ns.out)
    return RunConfig(**kwargs)


def _spectrum_payload(cfg: RunConfig) -> dict:
    if cfg.M is None:
        raise DomainError("spectrum needs -M")
    sp = solve_spectrum(cfg.bhe, cfg.M)

    closed = None
    if cfg.qes is not None and cfg.qes.b == 0.0 and cfg.M <= 3:
        closed = closed_form_energies(cfg.qes)

    oracle_vals = oracle_bars = None
    if cfg.with_oracle:
        if cfg.qes is None:
            raise DomainError(
                "the cross-check needs parameters with a well-side reading"
            )
        coeffs = qes_sextic_coeffs(cfg.qes)
        box = qes_discretization(coeffs, cfg.bhe.gamma, cfg.M + 1,
                                 n_points=max(cfg.points, 4000))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            res = fd_eigenvalues(coeffs, box, cfg.M + 1)
        oracle_vals, oracle_bars = res.eigenvalues, res.error_bars

    levels = []
    for i, lv in enumerate(sp.levels):
        entry: dict = {"n": lv.n, "energy": lv.energy, "q_root": lv.q_root}
        if closed is not None:
            entry["closed_form_energy"] = float(closed[i])
            entry["closed_form_diff"] = float(lv.energy - closed[i])
        if oracle_vals is not None:
            entry["oracle_energy"] = oracle_vals[i]
            entry["oracle_error_bar"] = oracle_bars[i]
            entry["oracle_diff"] = lv.energy - oracle_vals[i]
        levels.append(entry)

    params: dict = {
        "bhe": {"gamma": cfg.bhe.gamma, "delta": cfg.bhe.delta,
                "epsilon": cfg.bhe.epsilon, "alpha": cfg.bhe.alpha},
        "qes": None,
        "M": cfg.M,
    }
    if cfg.qes is not None:
        params["qes"] = {"a": cfg.qes.a, "b": cfg.qes.b,
                         "s": cfg.qes.s, "M": cfg.qes.M}
    return {"command": "spectrum", "parameters": params, "levels": levels}


def cmd_spectrum(cfg: RunConfig) -> int:
    payload = _stage("solve", _spectrum_payload, cfg)
    if cfg.fmt == "json":
        _stage("output", _emit_json, payload, cfg.out)
        return EXIT_OK
    columns = ["n", "energy", "q_root"]
    extras = [k for k in ("closed_form_energy", "closed_form_diff",
                          "oracle_energy", "oracle_error_bar", "oracle_diff")
              if payload["levels"] and k in payload["levels"][0]]
    columns += extras
    rows = [[entry[c] for c in columns] for entry in payload["levels"]]
    _stage("output", _emit_csv, columns, rows, cfg.out)
    return EXIT_OK


def _grid_extension(gamma: float, x_min: float) -> str:
    """Evaluation mode for a plot grid: origin limits on x >= 0, parity below.

    Grids touching x <= 0 only make sense for the parity families (gamma =
    1/2 even, 3/2 odd), where the half-line problem extends to the full line.
    """
    if x_min >= 0.0:
        return "even"
    if gamma == 0.5:
        return "even"
    if gamma == 1.5:
        return "odd"
    raise DomainError(
        "grids with x < 0 require the parity families gamma = 1/2 or 3/2"
    )


def cmd_wavefunction(cfg: RunConfig) -> int:
    if cfg.M is None:
        raise DomainError("wavefunction needs -M")
    sp = _stage("solve", solve_spectrum, cfg.bhe, cfg.M)
    extension = _grid_extension(cfg.bhe.gamma, cfg.x_min)
    wanted = cfg.levels if cfg.levels is not None else tuple(range(cfg.M + 1))
    bad = [n for n in wanted if n > cfg.M]
    if bad:
        raise DomainError(f"levels {bad} exceed M = {cfg.M}")

    out_dir = Path(cfg.out) if cfg.out is not None else Path("wavefunctions")
    out_dir.mkdir(parents=True, exist_ok=True)
    xs = np.linspace(cfg.x_min, cfg.x_max, cfg.points)
    node_grid = np.linspace(max(cfg.x_min, 1e-3), cfg.x_max, 2001)

    written = []
    nodes = []
    for n in wanted:
        level = sp.levels[n]
        w = build_wavefunction(level, cfg.bhe)
        psi = _stage("evaluate", eval_wavefunction, w, xs, extension)
        header = ["x", "psi"]
        cols = [xs, psi]
        if cfg.normalize:
            norm = float(np.sqrt(np.trapezoid(psi * psi, xs)))
            if norm == 0.0:
                raise DomainError("cannot normalize an identically zero table")
            header.append("psi_normalized")
            cols.append(psi / norm)
        rows = [[float(c[i]) for c in cols] for i in range(xs.size)]
        path = out_dir / f"psi_n{n}.csv"
        _emit_csv(header, rows, str(path))
        written.append(str(path))
        nodes.append({
            "n": n,
            "energy": level.energy,
            "nodes": _stage("nodes", count_nodes, w, node_grid),
        })

    sidecar = out_dir / "nodes.json"
    _emit_json({"command": "wavefunction", "M": cfg.M, "levels": nodes},
               str(sidecar))
    for path in written + [str(sidecar)]:
        sys.stdout.write(path + "\n")
    return EXIT_OK


def cmd_potential(cfg: RunConfig) -> int:
    case = TransformCase(m=cfg.case_m, sigma=cfg.sigma, x0=cfg.x0)
    gen = _stage("generate", potential_from_bhe, cfg.bhe, case, cfg.q)
    xs = np.linspace(cfg.x_min, cfg.x_max, cfg.points)
    if cfg.case_m == 0.5 and cfg.sigma == 1.0 and cfg.x0 == 0.0:
        values = potential_eval(gen.to_sextic_coeffs(), xs)
    else:
        values = _stage("evaluate", gen.evaluate, xs)

    term_notes = [
        (f"term: {_fmt(t.coefficient)} * exp({_fmt(t.exponent)} * x)"
         if t.is_exponential
         else f"term: {_fmt(t.coefficient)} * (x + x0)^{_fmt(t.exponent)}")
        for t in gen.terms
    ]
    if cfg.fmt == "csv":
        preamble = [f"transform case m = {_fmt(case.m)}, sigma = "
                    f"{_fmt(case.sigma)}, x0 = {_fmt(case.x0)}"]
        preamble += term_notes
        preamble.append(f"constant-slot energy = {_fmt(gen.energy)}")
        if cfg.case_m != 0.5:
            preamble.append("no solutions are computed for this case")
        rows = [[float(x), float(v)] for x, v in zip(xs, values)]
        _stage("output", _emit_csv, ["x", "V"], rows, cfg.out, preamble)
        return EXIT_OK
    payload = {
        "command": "potential",
        "case": {"m": case.m, "sigma": case.sigma, "x0": case.x0},
        "terms": [
            {"exponent": t.exponent, "coefficient": t.coefficient,
             "exponential": t.is_exponential}
            for t in gen.terms
        ],
        "energy": gen.energy,
        "solutions_computed": cfg.case_m == 0.5,
        "x": [float(v) for v in xs],
        "V": [float(v) for v in values],
    }
    _stage("output", _emit_json, payload, cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    kwargs: dict = {
        "tol": cfg.tol,
        "inject_wrong_centrifugal": cfg.inject_wrong_centrifugal,
    }
    if cfg.seed is not None:
        kwargs["seed"] = cfg.seed
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        verdict = _stage("suite", run_suite, **kwargs)
    _stage("output", _emit_json, verdict, cfg.out)
    return EXIT_OK if verdict["all_passed"] else EXIT_NUMERICAL


def cmd_figures(cfg: RunConfig) -> int:
    out_dir = Path(cfg.out) if cfg.out is not None else Path("figures")
    out_dir.mkdir(parents=True, exist_ok=True)
    qes = _REFERENCE_QES
    bhe = qes_to_bhe(qes)
    coeffs = qes_sextic_coeffs(qes)
    sp = _stage("solve", solve_spectrum, bhe, qes.M)

    xs = np.linspace(0.05, 3.0, 500)
    rows = [[float(x), float(v)] for x, v in zip(xs, potential_eval(coeffs, xs))]
    pot_path = out_dir / "potential.csv"
    _emit_csv(["x", "V"], rows, str(pot_path))

    lev_path = out_dir / "levels.csv"
    _emit_csv(
        ["n", "energy", "q_root"],
        [[lv.n, lv.energy, lv.q_root] for lv in sp.levels],
        str(lev_path),
    )

    written = [str(pot_path), str(lev_path)]
    grid = np.linspace(0.0, 3.0, 601)
    for lv in sp.levels:
        w = build_wavefunction(lv, bhe)
        psi = _stage("evaluate", eval_wavefunction, w, grid, "even")
        path = out_dir / f"psi_n{lv.n}.csv"
        _emit_csv(["x", "psi"],
                  [[float(x), float(v)] for x, v in zip(grid, psi)],
                  str(path))
        written.append(str(path))
    for path in written:
        sys.stdout.write(path + "\n")
    return EXIT_OK


class _StageFailure(Exception):
    """Carries the failing stage name and the mapped exit code."""

    def __init__(self, stage: str, exc: Exception, code: int) -> None:
        super().__init__(f"{stage}: {exc}")
        self.code = code


def _stage(name: str, fn, *args, **kwargs):
    """Run one pipeline stage, mapping library errors to labelled failures."""
    try:
        return fn(*args, **kwargs)
    except (DomainError, UnsupportedError) as exc:
        raise _StageFailure(name, exc, EXIT_USAGE) from exc
    except (HeunSexticError, FloatingPointError, np.linalg.LinAlgError) as exc:
        raise _StageFailure(name, exc, EXIT_NUMERICAL) from exc
    except OSError as exc:
        raise _StageFailure(name, exc, EXIT_USAGE) from exc


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "potential": cmd_potential,
    "verify": cmd_verify,
    "figures": cmd_figures,
}


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _stage("parameters", build_config, ns)
        return _DISPATCH[cfg.command](cfg)
    except _StageFailure as failure:
        sys.stderr.write(f"heun-sextic: {failure}\n")
        return failure.code
    except (DomainError, UnsupportedError) as exc:
        sys.stderr.write(f"heun-sextic: {exc}\n")
        return EXIT_USAGE
    except HeunSexticError as exc:
        sys.stderr.write(f"heun-sextic: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
