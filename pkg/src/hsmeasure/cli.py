"""Command-line front end: ``hsmeasure <command> [options]``.

Every command builds a :class:`~hsmeasure.report.Report` and prints it
(JSON by default).  Exit codes: 0 success, 2 usage error, 3 bad input,
4 a reported assertion failed.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .acceptance import run_acceptance
from .half_average import VectorFamily, cd_closed_form, estimate_cd, half_average_subset
from .hs_extension import construct_hs_measures, divergence_witness, optimality_check, spectral_demo
from .khintchine import (
    check_lower_constant,
    check_upper_constant,
    exact_moment,
    table,
    tail_bound_check,
)
from .matrixio import InputError, load_list, load_matrix, load_vector
from .report import Report, write_atomic
from .tensor_norms import (
    FamilyConfig,
    TensorElement,
    hs_norm,
    injective_norm,
    l_norm_bounds,
    m_norm_bounds,
    p_summing_profile,
    projective_norm,
    r_norm_bounds,
    sample_families,
)
from .vector_measures import ComplexMeasure, OptConfig, VectorMeasure, pi_ratio, semivariation, subset_sup, variation

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_ASSERT = 0, 2, 3, 4


def _tol(args, default):
    return default if args.tol is None else args.tol


def _complex_rows(M):
    return [[complex(x) for x in row] for row in np.atleast_2d(M)]


# -- commands ----------------------------------------------------------------


def cmd_semivar(args) -> Report:
    rng = np.random.default_rng(args.seed)
    if args.measure:
        atoms = load_matrix(args.measure, args.seed)
    else:
        atoms = rng.standard_normal((args.atoms, args.dim))
        if not args.real:
            atoms = atoms + 1j * rng.standard_normal((args.atoms, args.dim))
    phi = VectorMeasure.from_vectors(atoms)
    A = None if args.set is None else [int(x) for x in args.set.split(",") if x.strip()]
    res = semivariation(phi, A, OptConfig(seed=args.seed), field=args.field, method=args.method)
    rep = Report("semivar", {"seed": args.seed, "measure": args.measure, "atoms": phi.algebra.n_atoms,
                             "dim": phi.dim, "set": A, "field": args.field, "method": args.method})
    rep.outputs = {"value": res.value, "upper": res.upper, "gap": res.gap, "field": res.field,
                   "method": res.method, "converged": res.converged, "exact": res.exact,
                   "vector_norm": phi.vector_norm(A),
                   "total_atom_norm": float(np.linalg.norm(phi.restrict(A), axis=1).sum())}
    tol = _tol(args, 1e-8)
    rep.check("value_le_upper", res.value, res.upper, tol)
    rep.check("norm_le_value", phi.vector_norm(A), res.value, tol)
    return rep


def cmd_pi_ratio(args) -> Report:
    rng = np.random.default_rng(args.seed)
    if args.values:
        vals = load_vector(args.values)
    elif args.phases:
        vals = np.exp(2j * np.pi * np.arange(args.phases) / args.phases)
    else:
        vals = rng.standard_normal(args.atoms) + 1j * rng.standard_normal(args.atoms)
    lam = ComplexMeasure.from_values(vals)
    sup, mask = subset_sup(lam)
    var = variation(lam)
    rep = Report("pi-ratio", {"seed": args.seed, "values": args.values, "phases": args.phases,
                              "atoms": lam.algebra.n_atoms})
    ratio = pi_ratio(lam) if sup > 0 else 0.0
    rep.outputs = {"variation": var, "subset_sup": sup, "ratio": ratio,
                   "maximizing_set": list(lam.algebra.atoms(mask))}
    rep.check("variation_le_pi_sup", var, math.pi * sup, _tol(args, 1e-10))
    return rep


def cmd_crossnorm(args) -> Report:
    if args.matrix:
        z = TensorElement(load_matrix(args.matrix, args.seed))
    elif args.x and args.y:
        z = TensorElement.elementary(load_vector(args.x), load_vector(args.y))
    else:
        raise InputError("give --matrix, or both --x and --y")
    cfg = OptConfig(seed=args.seed)
    lb = l_norm_bounds(z, cfg, args.search_steps)
    rb = r_norm_bounds(z, cfg, args.search_steps)
    mb = m_norm_bounds(z, l_bounds=lb, r_bounds=rb)
    inj, proj, hs = injective_norm(z), projective_norm(z), hs_norm(z.coeffs)
    rep = Report("crossnorm", {"seed": args.seed, "matrix": args.matrix, "x": args.x, "y": args.y,
                               "shape": list(z.coeffs.shape), "search_steps": args.search_steps})
    rep.outputs = {"injective": inj, "projective": proj, "hilbert_schmidt": hs,
                   "l": {"lower": lb.lower, "upper": lb.upper},
                   "r": {"lower": rb.lower, "upper": rb.upper},
                   "m": {"lower": mb.lower, "upper": mb.upper}}
    tol = _tol(args, 1e-8)
    for name, b in (("l", lb), ("r", rb), ("m", mb)):
        rep.check(f"injective_le_{name}_upper", inj, b.upper, tol)
        rep.check(f"{name}_upper_le_projective", b.upper, proj, tol)
    return rep


def cmd_psumming(args) -> Report:
    T = load_matrix(args.matrix, args.seed)
    ps = load_list(args.p)
    if any(p < 1 for p in ps):
        raise InputError("p must be at least 1")
    fams = sample_families(T, FamilyConfig(random_families=args.families, seed=args.seed))
    prof = p_summing_profile(T, ps, fams)
    hs = hs_norm(T)
    rep = Report("psumming", {"seed": args.seed, "matrix": args.matrix, "p": ps, "families": len(fams)})
    rep.outputs = {"hilbert_schmidt": hs, "operator_norm": float(np.linalg.norm(T, 2)),
                   "profile": [{"p": p, "raw": r, "lower_bound": b}
                               for p, r, b in zip(prof.ps, prof.raw, prof.bounds)]}
    tol = _tol(args, 1e-8)
    for p, b in zip(prof.ps, prof.bounds):
        if p == 2:
            rep.check("p2_equals_hs", b, hs, tol, "==")
    rep.flag("non_increasing_in_p", all(a >= b for a, b in zip(prof.bounds, prof.bounds[1:])))
    return rep


def cmd_hs_construct(args) -> Report:
    T = load_matrix(args.matrix, args.seed)
    c = construct_hs_measures(T, args.variant, polar=args.polar)
    rep = Report("hs-construct", {"seed": args.seed, "matrix": args.matrix, "variant": args.variant,
                                  "polar": args.polar})
    rep.outputs = {"achieved": c.achieved, "hs": c.hs, "degenerate": c.degenerate,
                   "xi_norm": c.xi.vector_norm(), "eta_norm": c.eta.vector_norm(),
                   "xi": _complex_rows(c.xi.atom_vectors), "eta": _complex_rows(c.eta.atom_vectors)}
    tol = _tol(args, 1e-8)
    rep.check("achieved_equals_hs", c.achieved, c.hs, tol * (1 + c.hs), "==")
    rep.check("xi_unit", c.xi.vector_norm(), 1.0, 1e-10, "==")
    if not c.degenerate:
        rep.check("eta_unit", c.eta.vector_norm(), 1.0, 1e-10, "==")
    if args.optimality:
        o = optimality_check(T, samples=args.samples, seed=args.seed, polar=args.polar)
        rep.outputs["optimality_max_found"] = o.max_found
        rep.check("no_search_beats_hs", o.max_found, o.hs, 1e-8)
    return rep


def cmd_hs_diverge(args) -> Report:
    eps = load_list(args.eps) if args.eps else None
    w = divergence_witness(args.blocks, eps=eps, max_dim=args.max_dim)
    rep = Report("hs-diverge", {"seed": args.seed, "blocks": args.blocks, "eps": args.eps,
                                "max_dim": args.max_dim})
    rep.outputs = {"eps": w.eps, "block_dims": w.block_dims,
                   "block_values": [b.achieved for b in w.blocks], "partial_sums": w.partial_sums,
                   "xi_norm_sq_bound": w.norm_sq_bound,
                   "xi_tail_bound": w.xi.tail_bound if w.xi is not None else 0.0}
    tol = _tol(args, 1e-8)
    for i, (b, s) in enumerate(zip(w.blocks, w.partial_sums), 1):
        rep.check(f"block_{i}_ge_1", b.achieved, 1.0, tol, ">=")
        rep.check(f"partial_sum_{i}_ge_{i}", s, float(i), tol, ">=")
    rep.check("norm_sq_lt_1", w.norm_sq_bound, 1.0, 0.0, "<=")
    return rep


def cmd_spectral_demo(args) -> Report:
    rng = np.random.default_rng(args.seed)
    n = args.dim
    if args.H:
        H = load_matrix(args.H, args.seed)
        n = H.shape[0]
    else:
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = (A + A.conj().T) / 2
    T = load_matrix(args.T, args.seed) if args.T else rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    xi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    eta = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    times = load_list(args.times) if args.times else np.linspace(0.1, 10, args.points).tolist()
    r = spectral_demo(H, T, xi, eta, times)
    rep = Report("spectral-demo", {"seed": args.seed, "dim": n, "H": args.H, "T": args.T, "times": times})
    rep.outputs = {"max_discrepancy": r.max_discrepancy, "total_variation": r.total_variation,
                   "eigenvalues": r.eigenvalues, "direct": r.direct, "product_sum": r.product_sum}
    rep.check("max_discrepancy", r.max_discrepancy, 0.0, _tol(args, 1e-10))
    return rep


def cmd_khintchine(args) -> Report:
    ps = load_list(args.p)
    rep = Report("khintchine", {"seed": args.seed, "p": ps, "coeffs": args.coeffs})
    if args.coeffs:
        a = load_vector(args.coeffs)
        rows = []
        for p in ps:
            if p < 1:
                raise InputError("p must be at least 1")
            row = {"p": p, "moment": exact_moment(a, p), "norm2": float(np.linalg.norm(a))}
            if p > 2:
                c = check_upper_constant(a, p)
                row.update(kind="upper", bound=c.bound, ratio=c.ratio)
                rep.flag(f"upper_constant_p{p:g}", c.passed)
            elif p < 2:
                c = check_lower_constant(a, p)
                row.update(kind="lower", bound=c.bound, ratio=c.ratio)
                rep.flag(f"lower_constant_p{p:g}", c.passed)
            else:
                row.update(kind="exact", bound=1.0, ratio=row["moment"] / row["norm2"])
                rep.check("p2_moment_equals_norm", row["moment"], row["norm2"], _tol(args, 1e-12), "==")
            rows.append(row)
        rep.outputs = {"rows": rows}
        if np.all(np.imag(a) == 0):
            nrm = float(np.linalg.norm(a))
            tr = tail_bound_check(np.real(a), np.linspace(0, 4 * nrm, 17))
            rep.outputs["tail"] = {"t": tr.t, "tail": tr.tail, "bound": tr.bound}
            rep.flag("tail_bound", tr.passed)
    else:
        rows = table(ps)
        rep.outputs = {"rows": [{"p": r.p, "kind": r.kind, "bound": r.bound, "max_ratio": r.max_ratio,
                                 "cases": r.cases} for r in rows]}
        for r in rows:
            rep.flag(f"{r.kind}_constant_p{r.p:g}", r.passed)
    return rep


def cmd_halfavg(args) -> Report:
    rng = np.random.default_rng(args.seed)
    if args.vectors:
        V = load_matrix(args.vectors, args.seed)
        if np.any(np.imag(V) != 0):
            raise InputError("half-average vectors must be real")
        V = np.real(V)
    else:
        V = rng.standard_normal((args.count, args.dim))
    fam = VectorFamily.from_vectors(V)
    if len(fam) == 0:
        raise InputError("all vectors are zero")
    r = half_average_subset(fam)
    rep = Report("halfavg", {"seed": args.seed, "vectors": args.vectors, "count": V.shape[0], "dim": fam.d,
                             "samples": args.samples})
    rep.outputs = {"J": list(r.J), "ratio": r.ratio, "g_value": r.g_value, "C_d": r.constant,
                   "e0": r.e0}
    rep.check("ratio_ge_cd", r.ratio, r.constant, _tol(args, 1e-9), ">=")
    if fam.d >= 2 and args.samples > 0:
        e = estimate_cd(fam.d, args.samples, args.seed)
        rep.outputs["cd_estimate"] = {"estimate": e.estimate, "stderr": e.stderr, "closed_form": e.closed_form}
        rep.check("cd_estimate_within_4_stderr", abs(e.estimate - e.closed_form), 0.0, 4 * e.stderr)
    elif fam.d == 1:
        rep.outputs["cd_note"] = f"C_1 taken as {cd_closed_form(1)} (a two-point family caps the ratio at 1/2)"
    return rep


def cmd_accept(args) -> Report:
    only = None
    if args.only:
        only = [int(x) for x in args.only.split(",") if x.strip()]
        if any(k < 1 or k > 10 for k in only):
            raise InputError("criteria are numbered 1 to 10")
    results = run_acceptance(args.seed, only)
    rep = Report("accept", {"seed": args.seed, "only": only})
    rep.outputs = {"criteria": [c.as_dict() for c in results]}
    for c in results:
        rep.flag(f"criterion_{c.number}", c.passed)
    if not args.quiet:
        for c in results:
            print(c.line(), file=sys.stderr)
    return rep


# -- parser ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg_int(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _pos_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _u64(s):
    v = int(s)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=0, help="random seed (default 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--tol", type=float, default=None, help="override the assertion tolerance")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = _Parser(prog="hsmeasure", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("semivar", parents=[common], help="semi-variation of a vector measure")
    s.add_argument("--measure", help="matrix file or shorthand; row i is the vector of atom i")
    s.add_argument("--atoms", type=_pos_int, default=6)
    s.add_argument("--dim", type=_pos_int, default=3)
    s.add_argument("--real", action="store_true", help="random real measure")
    s.add_argument("--set", help="comma-separated atom indices (default all)")
    s.add_argument("--field", choices=("auto", "real", "complex"), default="auto")
    s.add_argument("--method", choices=("auto", "iterate", "enumerate"), default="auto")
    s.set_defaults(func=cmd_semivar)

    s = sub.add_parser("pi-ratio", parents=[common], help="variation over subset sup for a complex measure")
    s.add_argument("--values", help="comma list or file of atom values (re+imj)")
    s.add_argument("--phases", type=_pos_int, help="the n equally spaced unit phases")
    s.add_argument("--atoms", type=_pos_int, default=12)
    s.set_defaults(func=cmd_pi_ratio)

    s = sub.add_parser("crossnorm", parents=[common], help="cross norms of a tensor")
    s.add_argument("--matrix", help="coefficient matrix file or shorthand")
    s.add_argument("--x")
    s.add_argument("--y")
    s.add_argument("--search-steps", type=_nonneg_int, default=40)
    s.set_defaults(func=cmd_crossnorm)

    s = sub.add_parser("psumming", parents=[common], help="p-summing lower bounds")
    s.add_argument("--matrix", required=True)
    s.add_argument("--p", default="1,1.5,2,3,4")
    s.add_argument("--families", type=_nonneg_int, default=16, help="number of random families")
    s.set_defaults(func=cmd_psumming)

    s = sub.add_parser("hs-construct", parents=[common], help="orthogonal measures achieving the HS norm")
    s.add_argument("--matrix", required=True)
    s.add_argument("--variant", choices=("complex-dft", "real-hadamard"), default="complex-dft")
    s.add_argument("--polar", action="store_true", help="accept a general matrix via its polar reduction")
    s.add_argument("--optimality", action="store_true", help="also run the random optimality search (n <= 6)")
    s.add_argument("--samples", type=_pos_int, default=500)
    s.set_defaults(func=cmd_hs_construct)

    s = sub.add_parser("hs-diverge", parents=[common], help="divergence witness outside the HS class")
    s.add_argument("--blocks", type=_nonneg_int, default=5)
    s.add_argument("--eps", help="comma list of eps_n (default 1/(n+1))")
    s.add_argument("--max-dim", type=_pos_int, default=4096)
    s.set_defaults(func=cmd_hs_diverge)

    s = sub.add_parser("spectral-demo", parents=[common], help="product spectral measure identity")
    s.add_argument("--dim", type=_pos_int, default=5)
    s.add_argument("--H")
    s.add_argument("--T")
    s.add_argument("--times", help="comma list of times")
    s.add_argument("--points", type=_pos_int, default=20)
    s.set_defaults(func=cmd_spectral_demo)

    s = sub.add_parser("khintchine", parents=[common], help="Khintchine constants")
    s.add_argument("--p", default="1,1.5,3,4")
    s.add_argument("--coeffs", help="comma list or file of coefficients; omit for the corpus table")
    s.set_defaults(func=cmd_khintchine)

    s = sub.add_parser("halfavg", parents=[common], help="half-average subset")
    s.add_argument("--vectors", help="matrix file; row j is v_j")
    s.add_argument("--count", type=_pos_int, default=20)
    s.add_argument("--dim", type=_pos_int, default=2)
    s.add_argument("--samples", type=_nonneg_int, default=100_000, help="Monte Carlo samples for C_d")
    s.set_defaults(func=cmd_halfavg)

    s = sub.add_parser("accept", parents=[common], help="run the acceptance suite")
    s.add_argument("--only", help="comma list of criterion numbers")
    s.add_argument("--quiet", action="store_true", help="no per-criterion lines on stderr")
    s.set_defaults(func=cmd_accept)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rep = args.func(args)
    except (InputError, ValueError) as exc:
        print(f"hsmeasure: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = rep.render(args.format)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.passed else EXIT_ASSERT


if __name__ == "__main__":
    sys.exit(main())
