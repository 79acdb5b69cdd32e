"""Command-line front end.

Subcommands: enum | periods | theta | verify | map.  Machine-readable JSON
goes to stdout, a human summary to stderr.  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

REPORT_SCHEMA_VERSION = 1


def _eprint(*args):
    print(*args, file=sys.stderr)


def _load_config(path):
    text = Path(path).read_text()
    if str(path).endswith(".toml"):
        try:
            import tomllib
        except ImportError:  # python 3.10
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def _parse_points(values):
    from .periods import BranchConfig

    if len(values) != 8:
        raise ValueError("need exactly 8 points")
    return BranchConfig(tuple(float(v) for v in values))


def _emit(doc, as_json):
    doc["schema_version"] = REPORT_SCHEMA_VERSION
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True))


def cmd_enum(args):
    from . import f2
    from .lattice import audit_records

    doc = {}
    if args.shape == "2222":
        parts = f2.enumerate_partitions("2222")
        doc["partitions"] = [f2.partition_key(p) for p in parts]
        rows = doc["partitions"]
    else:
        splits = f2.enumerate_partitions("44")
        doc["splits"] = ["".join(map(str, a)) + "|" + "".join(map(str, b))
                         for a, b in splits]
        rows = doc["splits"]
    if args.audit:
        doc["coset_audit"] = audit_records()
    _eprint(f"{len(rows)} rows")
    if not args.json:
        for r in rows:
            print(r)
    _emit(doc, args.json)
    return 0


def cmd_periods(args):
    from .lattice import SIGMA1
    from .periods import (ball_point, export_json, normalized_tau,
                          period_matrix, period_matrix_to_tol,
                          tau_u_residual)

    cfg = _parse_points(args.points)
    t0 = time.time()
    nodes = args.nodes
    per = period_matrix_to_tol(cfg, tol=args.quad_tol, nodes=nodes)
    if args.refine:
        per2 = period_matrix(cfg, nodes=2 * nodes)
        delta = float(np.abs(per2.Pi - per.Pi).max())
        per = per2
    ntau = normalized_tau(per, SIGMA1, label="Sigma1")
    f, norm = ball_point(per)
    doc = export_json(per, ntau)
    doc["tau_u_residual"] = tau_u_residual(ntau)
    doc["ball_norm"] = norm
    doc["ball_vector_re"] = f.real.tolist()
    doc["ball_vector_im"] = f.imag.tolist()
    doc["elapsed_s"] = time.time() - t0
    if args.refine:
        doc["refine_delta"] = delta
    ok = (ntau.symmetry_residual < 1e-8 and ntau.min_imag_eigenvalue > 0
          and norm < 0)
    doc["checks"] = {
        "tau_symmetric": ntau.symmetry_residual < 1e-8,
        "im_tau_positive": ntau.min_imag_eigenvalue > 0,
        "ball_norm_negative": norm < 0,
    }
    _eprint(f"tau symmetric: {doc['checks']['tau_symmetric']}, "
            f"Im tau > 0: {doc['checks']['im_tau_positive']}, "
            f"ball norm: {norm:.6f}")
    _emit(doc, args.json)
    return 0 if ok else 1


def cmd_theta(args):
    from .forms import (FormsContext, cross_ratio_check,
                        quadruple_identity_residuals, theta_quadruple,
                        vanishing_table)

    cfg = _parse_points(args.points)
    ctx = FormsContext.build(cfg, theta_tol=args.theta_tol,
                             quad_tol=args.quad_tol,
                             precision=args.precision)
    th = theta_quadruple(ctx.evaluator_sigma1())
    r1, r2 = quadruple_identity_residuals(th)
    cr = cross_ratio_check(ctx)
    table = vanishing_table(ctx)
    doc = {
        "theta_constants": [[t.real, t.imag] for t in th],
        "product_identity_residual": r1,
        "companion_identity_residual": r2,
        "cross_ratio_residual": cr,
        "vanishing_table": {f"m{k}_p{j}": table[(k, j)]
                            for k in range(1, 5) for j in range(1, 9)},
        "theta_backend": _backend(),
    }
    _eprint(f"cross-ratio residual {cr:.2e}; "
            f"quadruple identities {r1:.2e}, {r2:.2e}")
    _emit(doc, args.json)
    return 0 if max(r1, r2, cr) < 1e-5 else 1


def _backend():
    from .theta import backend_name

    return backend_name()


def cmd_map(args):
    from .forms import FormsContext, theta_map

    cfg = _parse_points(args.points)
    t0 = time.time()
    ctx = FormsContext.build(cfg, theta_tol=args.theta_tol,
                             quad_tol=args.quad_tol,
                             precision=args.precision)
    out = theta_map(ctx, check_direct=not args.no_direct_check)
    doc = {
        "records": out["records"],
        "max_residual": out["max_residual"],
        "max_tau_agreement": out["max_tau_agreement"],
        "theta_tol": args.theta_tol,
        "theta_backend": _backend(),
        "elapsed_s": time.time() - t0,
    }
    _eprint(f"105 forms: max residual {out['max_residual']:.3e} "
            f"(tau transport agreement {out['max_tau_agreement']:.3e}) "
            f"in {doc['elapsed_s']:.1f}s")
    _emit(doc, args.json)
    return 0 if out["max_residual"] < 1e-5 else 1


SUITES = ("combinatorics", "lattice", "periods", "theta", "forms", "full")


def _suite_combinatorics(doc, _args):
    from itertools import permutations

    from . import f2

    ok = True
    n2222 = len(f2.enumerate_partitions("2222"))
    n44 = len(f2.enumerate_partitions("44"))
    nsing = len(f2.singular_vectors())
    images = {f2.pack(f2.perm_to_orthogonal(s))
              for s in permutations(range(1, 9))}
    gens_preserve = all(
        f2.preserves_q(f2.perm_to_orthogonal(
            tuple(p + 1 if j == p else (p if j == p + 1 else j)
                  for j in range(1, 9))))
        for p in range(1, 8))
    doc["combinatorics"] = {
        "partitions_2222": n2222,
        "partitions_44": n44,
        "singular_nonzero": nsing,
        "distinct_images": len(images),
        "generators_preserve_q": gens_preserve,
    }
    ok = (n2222 == 105 and n44 == 35 and nsing == 35
          and len(images) == 40320 and gens_preserve)
    return ok


def _suite_lattice(doc, args):
    from . import lattice
    from .lattice import (SIGMA1, SIGMA_B, basis_change, coset_table,
                          delta_class_offset, delta_in_expected_lattice,
                          in_lattice, is_group_element, reflection,
                          transform_basis, translation_vector)

    U = lattice.U_MAT if not args.corrupt_u else tuple(
        tuple(-v for v in row) for row in lattice.U_MAT)
    # rho pattern on Sigma1 against the (possibly corrupted) U
    rho_ok = True
    a = SIGMA1[:6]
    b = SIGMA1[6:]
    for i in range(6):
        want = tuple(sum(-U[i][k] * b[k][t] for k in range(6))
                     for t in range(12))
        if lattice.rho(a[i]) != want:
            rho_ok = False
    refl_ok = all(is_group_element(reflection(p)) for p in range(1, 8))
    table = coset_table()
    deltas_ok = True
    offset = None
    offset_const = True
    contain_ok = True
    one_minus_rho = [tuple(x - y for x, y in zip(v, lattice.rho(v)))
                     for v in lattice.STD_BASIS]
    for part, rec in table.items():
        basis_g = transform_basis(rec["element"])
        sig = basis_change(basis_g, SIGMA_B)
        delta = translation_vector(sig)
        if not delta_in_expected_lattice(delta):
            deltas_ok = False
        off = delta_class_offset(rec["element"], delta)
        if offset is None:
            offset = off
        elif off != offset:
            offset_const = False
        if not all(in_lattice(basis_g, w) for w in one_minus_rho[:2]):
            contain_ok = False
    doc["lattice"] = {
        "rho_pattern": rho_ok,
        "reflections_in_group": refl_ok,
        "delta_membership": deltas_ok,
        "delta_class_offset_constant": offset_const,
        "contains_one_minus_rho": contain_ok,
        "cosets": len(table),
    }
    return all([rho_ok, refl_ok, deltas_ok, offset_const, contain_ok,
                len(table) == 105])


def _suite_periods(doc, args):
    from .lattice import SIGMA1
    from .periods import (ball_point, cycle_relation_residuals,
                          normalized_tau, period_matrix, random_configs,
                          tau_u_residual)

    cfgs = [_parse_points(args.points)]
    cfgs += random_configs(args.random_configs, args.seed)
    worst = {"sym": 0.0, "tauU": 0.0, "relation": 0.0}
    ball_ok = True
    for cfg in cfgs:
        per = period_matrix(cfg)
        ntau = normalized_tau(per, SIGMA1, label="Sigma1")
        worst["sym"] = max(worst["sym"], ntau.symmetry_residual)
        worst["tauU"] = max(worst["tauU"], tau_u_residual(ntau))
        rs, rw = cycle_relation_residuals(cfg)
        worst["relation"] = max(worst["relation"], max(rs), max(rw))
        _, norm = ball_point(per)
        ball_ok = ball_ok and norm < 0
    doc["periods"] = dict(worst, ball_norm_negative=ball_ok,
                          configs=len(cfgs))
    return (worst["sym"] < 1e-8 and worst["tauU"] < 1e-7
            and worst["relation"] < 1e-8 and ball_ok)


def _suite_theta(doc, args):
    import numpy as np

    from .theta import (Characteristic, ThetaEvaluator, theta_series_1d)

    ev = ThetaEvaluator(1j * np.eye(6), tol=1e-13)
    synth = ev.constant(Characteristic.zero())
    oracle = theta_series_1d(1.0) ** 6
    synth_res = abs(synth - oracle)
    # quasi-periodicity at a random-ish tau from the current config
    from .forms import FormsContext

    ctx = FormsContext.build(_parse_points(args.points),
                             theta_tol=args.theta_tol)
    ev1 = ctx.evaluator_sigma1()
    rng = np.random.default_rng(args.seed)
    ch = Characteristic.make([0, 0.5, 0, 0.5, 0, 0], [0.5, 0, 0, 0, 0.5, 0])
    z = rng.normal(size=6) * 0.2 + 1j * rng.normal(size=6) * 0.2
    r = rng.integers(-2, 3, 6)
    s = rng.integers(-2, 3, 6)
    tau = ctx.tau1.tau
    lhs = ev1.value(ch, z + r @ tau + s).value
    mp, mpp = ch.floats()
    phase = np.exp(2j * np.pi * (-0.5 * r @ tau @ r - r @ z
                                 + mp @ s - mpp @ r))
    rhs = phase * ev1.value(ch, z).value
    quasi = abs(lhs - rhs) / max(abs(lhs), abs(rhs))
    doc["theta"] = {"synthetic_residual": synth_res,
                    "quasi_periodicity_residual": quasi}
    return synth_res < 1e-10 and quasi < 1e-8


def _suite_forms(doc, args):
    from .forms import FormsContext, cross_ratio_check, theta_map

    ctx = FormsContext.build(_parse_points(args.points),
                             theta_tol=args.theta_tol)
    cr = cross_ratio_check(ctx)
    out = theta_map(ctx)
    doc["forms"] = {
        "cross_ratio_residual": cr,
        "map_max_residual": out["max_residual"],
        "tau_agreement": out["max_tau_agreement"],
    }
    return cr < 1e-5 and out["max_residual"] < 1e-5 \
        and out["max_tau_agreement"] < 1e-6


def cmd_verify(args):
    t0 = time.time()
    wanted = SUITES[:-1] if args.suite == "full" else (args.suite,)
    doc = {"suites": list(wanted), "seed": args.seed}
    runners = {
        "combinatorics": _suite_combinatorics,
        "lattice": _suite_lattice,
        "periods": _suite_periods,
        "theta": _suite_theta,
        "forms": _suite_forms,
    }
    ok = True
    for name in wanted:
        good = runners[name](doc, args)
        doc.setdefault("status", {})[name] = "pass" if good else "fail"
        _eprint(f"suite {name}: {'pass' if good else 'FAIL'}")
        ok = ok and good
    doc["elapsed_s"] = time.time() - t0
    _emit(doc, args.json)
    return 0 if ok else 1


def build_parser(defaults=None):
    ap = argparse.ArgumentParser(
        prog="prymtheta",
        description="Period map and theta-constant verification suites.")
    sub = ap.add_subparsers(dest="command", required=True)

    defaults = defaults or {}

    def add_common(p, points=True):
        if points:
            p.add_argument("--points", nargs=8, type=float,
                           default=defaults.get("points", list(range(1, 9))),
                           metavar="X",
                           help="eight increasing branch points")
        p.add_argument("--config", default=None,
                       help="JSON or TOML file supplying these options")
        p.add_argument("--theta-tol", type=float,
                       default=defaults.get("theta_tol", 1e-12))
        p.add_argument("--quad-tol", type=float,
                       default=defaults.get("quad_tol", 1e-10))
        p.add_argument("--precision", choices=("double", "extended"),
                       default=defaults.get("precision", "double"))
        p.add_argument("--seed", type=int,
                       default=defaults.get("seed", 20240801))
        p.add_argument("--json", action="store_true",
                       help="emit a JSON report on stdout")

    p = sub.add_parser("enum", help="enumerate partitions and coset data")
    p.add_argument("--shape", choices=("2222", "44"), default="2222")
    p.add_argument("--audit", action="store_true",
                   help="include the 105 coset/sigma/delta records")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("periods", help="period matrix and tau diagnostics")
    add_common(p)
    p.add_argument("--nodes", type=int, default=96)
    p.add_argument("--refine", action="store_true",
                   help="double the node count and report the change")
    p.set_defaults(func=cmd_periods)

    p = sub.add_parser("theta", help="theta constants and identities")
    add_common(p)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("map", help="the 105-form comparison report")
    add_common(p)
    p.add_argument("--no-direct-check", action="store_true",
                   help="skip the direct tau transport cross-check")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("verify", help="run verification suites")
    add_common(p)
    p.add_argument("--suite", choices=SUITES,
                   default=defaults.get("suite", "full"))
    p.add_argument("--random-configs", type=int,
                   default=defaults.get("random_configs", 3))
    p.add_argument("--corrupt-u", action="store_true",
                   help=argparse.SUPPRESS)  # negative-control test hook
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    defaults = None
    if "--config" in argv:
        try:
            defaults = _load_config(argv[argv.index("--config") + 1])
        except (OSError, IndexError, ValueError, ImportError) as exc:
            _eprint(f"error reading config: {exc}")
            return 2
    ap = build_parser(defaults)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, ArithmeticError) as exc:
        _eprint(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
