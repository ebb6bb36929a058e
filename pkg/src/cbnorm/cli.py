"""Command-line front end: JSON in, JSON out, deterministic.

Exit codes: 0 on success, 2 on input validation errors (with a
machine-readable ``{"error": ...}`` document), 1 on solver failure.
Complex vectors on the wire are ``{"re": [...], "im": [...]}`` (``im``
optional); matrices use the format documented in :mod:`cbnorm.linalg`.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import acceptance, functorial, groups, harmonic, linalg, predual, schur, sdp

__all__ = ["main", "run"]


class InputError(ValueError):
    """Bad user input: unknown flags, malformed JSON, axiom violations."""


def _load_json(source: str, what: str) -> Any:
    """Parse inline JSON, or read a file when the argument names one."""
    text = source
    path = Path(source)
    try:
        if path.exists() and path.is_file():
            text = path.read_text(encoding="utf-8")
    except OSError:
        pass
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: malformed JSON ({exc})") from exc


def _vector_from_json(doc: Any, what: str) -> np.ndarray:
    if isinstance(doc, dict):
        try:
            re = np.asarray(doc["re"], dtype=float)
        except (KeyError, ValueError) as exc:
            raise InputError(f"{what}: expected 're' array ({exc})") from exc
        im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape or re.ndim != 1:
            raise InputError(f"{what}: 're'/'im' must be equal-length flat arrays")
        return re + 1j * im
    arr = np.asarray(doc)
    if arr.ndim != 1:
        raise InputError(f"{what}: expected a flat array")
    out = np.zeros(arr.shape[0], dtype=complex)
    for i, entry in enumerate(arr.tolist() if hasattr(arr, "tolist") else arr):
        if isinstance(entry, dict):
            out[i] = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        else:
            out[i] = complex(entry)
    return out


def _vector_to_json(v: np.ndarray) -> dict:
    doc = {"re": [float(x) for x in np.real(v)]}
    if np.any(np.imag(v) != 0.0):
        doc["im"] = [float(x) for x in np.imag(v)]
    return doc


def _group_arg(text: str) -> groups.FiniteGroup | groups.FiniteSection:
    spec = _load_json(text, "group spec")
    try:
        return groups.group_from_spec(spec)
    except ValueError as exc:
        raise InputError(f"group spec: {exc}") from exc


def _finite_group(carrier) -> groups.FiniteGroup:
    if not isinstance(carrier, groups.FiniteGroup):
        raise InputError("this command needs a finite group, not a section")
    return carrier


def _multiplier_arg(text: str, carrier, seed: int) -> harmonic.Multiplier:
    if ":" in text and not text.lstrip().startswith(("[", "{")):
        try:
            return harmonic.builtin_multiplier(text, carrier, seed=seed)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    vals = _vector_from_json(_load_json(text, "multiplier values"), "multiplier values")
    if isinstance(carrier, groups.FiniteGroup):
        try:
            return harmonic.Multiplier.on_group(carrier, vals)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError("sections take built-in families (decay:r, indicator:.., random:..)")


def _report_doc(report: schur.NormReport) -> dict:
    doc: dict = {"norm": report.norm, "gap": report.gap}
    if report.witness is not None:
        doc["witness"] = {
            "dim": report.witness.dim,
            "xi": linalg.matrix_to_json(report.witness.xi),
            "eta": linalg.matrix_to_json(report.witness.eta),
            "bound": report.witness.bound(),
        }
    else:
        doc["witness"] = None
    if report.residual is not None:
        doc["residual"] = report.residual
    if report.lower_bound:
        doc["lower_bound"] = True
    if report.kernel is not None:
        doc["kernel"] = linalg.matrix_to_json(report.kernel)
    if report.optimizer is not None:
        opt = np.asarray(report.optimizer)
        doc["optimizer"] = (
            linalg.matrix_to_json(opt) if opt.ndim == 2 else _vector_to_json(opt)
        )
    return doc


def _tolerances(args: argparse.Namespace) -> sdp.Tolerances:
    try:
        return sdp.Tolerances(
            gap_tol=args.gap_tol, feas_tol=args.feas_tol, max_iterations=args.max_iters
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _emit(doc: Any, args: argparse.Namespace) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


# -- subcommand handlers -----------------------------------------------------


def _cmd_schur_norm(args) -> dict:
    u = linalg.matrix_from_json(_load_json(args.matrix, "symbol"))
    return _report_doc(schur.schur_norm(u, _tolerances(args)))


def _cmd_schur_apply(args) -> dict:
    u = linalg.matrix_from_json(_load_json(args.symbol, "symbol"))
    x = linalg.matrix_from_json(_load_json(args.matrix, "matrix"))
    try:
        return linalg.matrix_to_json(schur.schur_apply(u, x))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _cmd_predual_norm(args) -> dict:
    mu = linalg.matrix_from_json(_load_json(args.matrix, "mu"))
    return _report_doc(schur.haagerup_predual_norm(mu, _tolerances(args)))


def _cmd_cb_norm(args) -> dict:
    carrier = _group_arg(args.group)
    u = _multiplier_arg(args.u, carrier, args.seed)
    mat = harmonic.herz_schur_matrix(u)
    doc = _report_doc(harmonic.cb_norm(u, _tolerances(args)))
    doc["matrix_shape"] = list(mat.shape)
    return doc


def _cmd_a_norm(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    u = _multiplier_arg(args.u, g, args.seed)
    doc = _report_doc(harmonic.a_norm(u, _tolerances(args)))
    doc["note"] = "Fourier-Stieltjes norm coincides with this value on finite groups"
    return doc


def _cmd_q_norm(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    f = _vector_from_json(_load_json(args.f, "f"), "f")
    if f.shape != (g.order,):
        raise InputError(f"f must have length {g.order}")
    return _report_doc(predual.q_norm(f, g, method=args.method, tols=_tolerances(args)))


def _cmd_cstar_norm(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    f = _vector_from_json(_load_json(args.f, "f"), "f")
    if f.shape != (g.order,):
        raise InputError(f"f must have length {g.order}")
    return {"norm": predual.c_star_norm(f, g)}


def _cmd_pairing(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    u = _multiplier_arg(args.u, g, args.seed)
    f = _vector_from_json(_load_json(args.f, "f"), "f")
    if f.shape != (g.order,):
        raise InputError(f"f must have length {g.order}")
    value = predual.pairing(u, f)
    return {"re": value.real, "im": value.imag}


def _cmd_sections(args) -> dict:
    lo, _, hi = args.radius.partition("..")
    try:
        radii = list(range(int(lo), int(hi if hi else lo) + 1))
    except ValueError as exc:
        raise InputError(f"bad radius range {args.radius!r}") from exc
    if not radii:
        raise InputError("empty radius range")
    secs = [groups.free_group_section(args.free, r) for r in radii]
    mult = harmonic.builtin_multiplier(args.u, secs[-1], seed=args.seed)
    reports = harmonic.cb_norm_sections(mult.values, secs, _tolerances(args))
    return {
        "generators": args.free,
        "radii": radii,
        "sizes": [s.size for s in secs],
        "reports": [_report_doc(r) for r in reports],
    }


def _subgroup_arg(text: str) -> list[int]:
    doc = _load_json(text, "subgroup")
    if not isinstance(doc, list):
        raise InputError("subgroup must be a JSON array of element indices")
    return [int(x) for x in doc]


def _with_verification(args, u_in, u_out, doc: dict) -> dict:
    if args.verify:
        cmp_res = functorial.compare_cb_norms(u_in, u_out, _tolerances(args))
        doc["verify"] = {"norm_in": cmp_res.norm_in, "norm_out": cmp_res.norm_out}
    return doc


def _cmd_restrict(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    u = _multiplier_arg(args.u, g, args.seed)
    try:
        ru, emb = functorial.restrict(u, _subgroup_arg(args.subgroup))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    doc = {"values": _vector_to_json(np.asarray(ru.values)), "embedding": emb}
    return _with_verification(args, u, ru, doc)


def _cmd_extend(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    sub = _subgroup_arg(args.subgroup)
    try:
        h, emb = groups.subgroup_group(g, sub)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    u = _multiplier_arg(args.u, h, args.seed)
    eu = functorial.extend_zero(u, g, emb)
    doc = {"values": _vector_to_json(np.asarray(eu.values))}
    return _with_verification(args, u, eu, doc)


def _cmd_lift(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    try:
        q, qhom = groups.quotient(g, _subgroup_arg(args.normal))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    u = _multiplier_arg(args.u, q, args.seed)
    lifted = functorial.lift_from_quotient(u, qhom)
    doc = {
        "quotient_order": q.order,
        "values": _vector_to_json(np.asarray(lifted.values)),
    }
    return _with_verification(args, u, lifted, doc)


def _cmd_pullback(args) -> dict:
    g = _finite_group(_group_arg(args.group))
    h = _finite_group(_group_arg(args.target))
    mapping = _load_json(args.hom, "homomorphism")
    if not isinstance(mapping, list):
        raise InputError("homomorphism must be a JSON array mapping each element")
    try:
        sigma = groups.hom_from_map(g, h, [int(x) for x in mapping])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    u = _multiplier_arg(args.u, h, args.seed)
    pulled = functorial.pullback(u, sigma)
    doc = {"values": _vector_to_json(np.asarray(pulled.values))}
    return _with_verification(args, u, pulled, doc)


def _cmd_acceptance(args) -> dict:
    results = acceptance.run_suite(
        suite=args.suite, seed=args.seed, threads=args.threads,
        echo=lambda line: print(line, file=sys.stderr),
    )
    return {
        "suite": args.suite,
        "seed": args.seed,
        "passed": all(r.passed for r in results),
        "criteria": [r.as_dict() for r in results],
    }


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbnorm",
        description="Multiplier norms on matrices and finite groups via SDP",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, group: bool = False) -> None:
        p.add_argument("--gap-tol", type=float, default=1e-7, dest="gap_tol")
        p.add_argument("--feas-tol", type=float, default=1e-8, dest="feas_tol")
        p.add_argument("--max-iters", type=int, default=200, dest="max_iters")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", dest="output", default=None, help="write JSON here")
        if group:
            p.add_argument("--group", required=True, help="group spec JSON")

    p = sub.add_parser("schur-norm", help="multiplier norm of a symbol")
    p.add_argument("matrix", help="matrix JSON (inline or file)")
    common(p)
    p.set_defaults(fn=_cmd_schur_norm)

    p = sub.add_parser("schur-apply", help="entrywise action of a symbol")
    p.add_argument("symbol")
    p.add_argument("matrix")
    common(p)
    p.set_defaults(fn=_cmd_schur_apply)

    p = sub.add_parser("predual-norm", help="trace-pairing predual norm")
    p.add_argument("matrix")
    common(p)
    p.set_defaults(fn=_cmd_predual_norm)

    p = sub.add_parser("cb-norm", help="completely bounded multiplier norm")
    common(p, group=True)
    p.add_argument("--u", required=True, help="values JSON or family spec")
    p.set_defaults(fn=_cmd_cb_norm)

    p = sub.add_parser("a-norm", help="Fourier-algebra norm")
    common(p, group=True)
    p.add_argument("--u", required=True)
    p.set_defaults(fn=_cmd_a_norm)

    p = sub.add_parser("q-norm", help="standard-predual norm")
    common(p, group=True)
    p.add_argument("--f", required=True)
    p.add_argument("--method", choices=("dual", "primal"), default="dual")
    p.set_defaults(fn=_cmd_q_norm)

    p = sub.add_parser("cstar-norm", help="reduced-algebra norm of a function")
    common(p, group=True)
    p.add_argument("--f", required=True)
    p.set_defaults(fn=_cmd_cstar_norm)

    p = sub.add_parser("pairing", help="bilinear pairing <u, q(f)>")
    common(p, group=True)
    p.add_argument("--u", required=True)
    p.add_argument("--f", required=True)
    p.set_defaults(fn=_cmd_pairing)

    p = sub.add_parser("sections", help="lower bounds along free-group balls")
    common(p)
    p.add_argument("--free", type=int, required=True, help="number of generators")
    p.add_argument("--radius", required=True, help="radius or lo..hi range")
    p.add_argument("--u", required=True, help="family spec, e.g. decay:0.5")
    p.set_defaults(fn=_cmd_sections)

    p = sub.add_parser("restrict", help="restrict a multiplier to a subgroup")
    common(p, group=True)
    p.add_argument("--u", required=True)
    p.add_argument("--subgroup", required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(fn=_cmd_restrict)

    p = sub.add_parser("extend", help="extend a subgroup multiplier by zero")
    common(p, group=True)
    p.add_argument("--u", required=True, help="values on the subgroup")
    p.add_argument("--subgroup", required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(fn=_cmd_extend)

    p = sub.add_parser("lift", help="lift a multiplier from a quotient")
    common(p, group=True)
    p.add_argument("--u", required=True, help="values on the quotient")
    p.add_argument("--normal", required=True, help="normal subgroup element list")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(fn=_cmd_lift)

    p = sub.add_parser("pullback", help="pull a multiplier back along a hom")
    common(p, group=True)
    p.add_argument("--target", required=True, help="target group spec")
    p.add_argument("--hom", required=True, help="element map as a JSON array")
    p.add_argument("--u", required=True, help="values on the target")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(fn=_cmd_pullback)

    p = sub.add_parser("acceptance", help="run the acceptance suite")
    common(p)
    p.add_argument("--suite", default="primary")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(fn=_cmd_acceptance)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        doc = args.fn(args)
    except InputError as exc:
        _emit({"error": str(exc)}, args)
        return 2
    except (ValueError, KeyError) as exc:
        _emit({"error": str(exc)}, args)
        return 2
    except sdp.SolverError as exc:
        _emit({"error": str(exc)}, args)
        return 1
    _emit(doc, args)
    if args.command == "acceptance" and not doc["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())
