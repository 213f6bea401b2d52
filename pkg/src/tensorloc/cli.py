"""Command line entry point: ``tensorloc {info,member,region,certify,eig,verify} TENSOR``.

Exit codes: 0 success, 1 a theorem-backed check failed, 2 input error,
3 inconclusive (the oracle found no eigenpair).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, certificates, raster
from . import regions as R
from .oracle import OracleConfig, eigen_solve
from .tensor import TensorFormatError, UsageError, load_tensor, row_sums

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise UsageError(f"expected 're,im', got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"expected 're,im', got {text!r}") from None
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def _parse_resolution(text: str):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"expected WxH, got {text!r}") from None
    return w, h


def _parse_window(text: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected re_min,re_max,im_min,im_max, got {text!r}") from None
    if len(vals) != 4:
        raise UsageError(f"expected re_min,re_max,im_min,im_max, got {text!r}")
    return R.Window(*vals)


def _fmt_c(z) -> str:
    z = complex(z)
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _write(args, data):
    if isinstance(data, str):
        data = data.encode("utf-8")
    if args.out in (None, "-"):
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)


def _query(args, family=None, tol=None) -> R.RegionQuery:
    family = R.Family.parse(family or args.set)
    given = [k for k in (args.i, args.j) if k is not None]
    return R.RegionQuery(family, tuple(given[: family.arity]), args.tol if tol is None else tol)


def _oracle_cfg(args) -> OracleConfig:
    return OracleConfig(starts=args.starts, seed=args.seed)


def cmd_info(args, A):
    S = row_sums(A)
    n = A.dim
    lines = [f"order m = {A.order}", f"dim n = {n}", f"nonzeros = {A.nnz}", "", "i  diag            r_i"]
    for i in range(n):
        lines.append(f"{i + 1:<2} {_fmt_c(S.diag[i]):<15} {S.r[i]:.12g}")
    lines += ["", "r_i^j (row i, column j; diagonal unused)"]
    lines.append("     " + " ".join(f"{j + 1:>14}" for j in range(n)))
    for i in range(n):
        cells = ["{:>14}".format("-" if i == j else f"{S.r_partial[i, j]:.10g}") for j in range(n)]
        lines.append(f"{i + 1:<4} " + " ".join(cells))
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_member(args, A):
    if args.z is None:
        raise UsageError("member needs --z re,im")
    z = _parse_complex(args.z)
    q = _query(args)
    inside = R.region_contains(row_sums(A), q, z)
    _write(args, f"{q.name} {_fmt_c(z)} {'true' if inside else 'false'}\n")
    return EXIT_OK


def cmd_region(args, A):
    S = row_sums(A)
    width, height = _parse_resolution(args.resolution)
    window = _parse_window(args.window) if args.window else R.default_window(S)
    layers = [raster.rasterize(S, _query(args, family=name), width, height, window)
              for name in args.set.split(",")]
    points = []
    if args.mark_eigs:
        points = [p.lam for p in eigen_solve(A, _oracle_cfg(args))]
    _write(args, raster.emit(layers, args.format, points))
    return EXIT_OK


def cmd_certify(args, A):
    S = row_sums(A)
    methods = ["gersgorin", "brauer"] if args.method == "both" else [args.method]
    lines = []
    for method in methods:
        if method == "brauer" and S.n < 2:
            lines.append("brauer: not applicable (n = 1)")
            continue
        cert = certificates.certify(S, method)
        lines.append(f"{method}: {cert.verdict.value}")
        for key, w in cert.witnesses.items():
            other = "" if w.other is None else f" via {w.other}"
            lines.append(f"  {key}: branch {w.branch}{other} ({w.lhs:.12g} vs {w.rhs:.12g})")
        for key in cert.failed:
            lines.append(f"  {key}: no branch holds")
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_eig(args, A):
    pairs = eigen_solve(A, _oracle_cfg(args))
    out = []
    for p in pairs:
        out.append(json.dumps({
            "lambda_re": p.lam.real,
            "lambda_im": p.lam.imag,
            "x": [[v.real, v.imag] for v in p.x.tolist()],
            "residual": p.residual,
        }))
    _write(args, "".join(line + "\n" for line in out))
    return EXIT_OK


def _max_rows(x, rel=1e-9):
    mags = np.abs(x)
    return np.flatnonzero(mags >= mags.max() * (1 - rel))


def verify_report(A, cfg: OracleConfig, tol: float = 1e-8, grid: int = 200):
    """Run every theorem-backed check; returns ``(lines, exit_code)``."""
    S = row_sums(A)
    pairs = eigen_solve(A, cfg)
    lines = [f"oracle: {len(pairs)} eigenpairs"]
    if not pairs:
        lines.append("INCONCLUSIVE no eigenpair found; raise --starts")
        return lines, EXIT_INCONCLUSIVE
    brauer = S.n >= 2
    lams = np.array([p.lam for p in pairs])
    checks = [
        ("eigenvalues in Gamma", R.gamma_contains(S, lams, tol)),
        ("eigenvalues in Omega", R.omega_contains(S, lams, tol)),
    ]
    if brauer:
        checks += [
            ("eigenvalues in K", R.k_contains(S, lams, tol)),
            ("eigenvalues in Theta", R.theta_contains(S, lams, tol)),
        ]
    # the exclusion sets are eigenvalue-free for the row where |x_t| is largest
    excl = []
    for p in pairs:
        ok = False
        for t0 in _max_rows(p.x):
            hit = R.delta_i_contains(S, t0 + 1, p.lam, tol)
            if brauer:
                hit = hit or R.lambda_i_contains(S, t0 + 1, p.lam, tol)
            ok = ok or not hit
        excl.append(ok)
    checks.append(("eigenvalues outside Delta_t and Lambda_t (t = max |x_t|)", np.array(excl)))

    Z = raster.pixel_centers(R.default_window(S), grid, grid)
    gam, om = R.gamma_contains(S, Z), R.omega_contains(S, Z)
    checks.append((f"grid {grid}x{grid}: Omega subset of Gamma", ~(om & ~gam)))
    if brauer:
        k, th = R.k_contains(S, Z), R.theta_contains(S, Z)
        checks.append((f"grid {grid}x{grid}: Theta subset of K", ~(th & ~k)))
        checks.append((f"grid {grid}x{grid}: K subset of Gamma", ~(k & ~gam)))

    failed = False
    for name, mask in checks:
        mask = np.asarray(mask)
        if mask.all():
            lines.append(f"PASS {name}")
        else:
            failed = True
            lines.append(f"FAIL {name} ({int((~mask).sum())} violations)")

    hits = sum(
        bool(R.delta_ij_contains(S, i, j, p.lam, tol) or (brauer and R.lambda_ip_contains(S, i, j, p.lam, tol)))
        for p in pairs for i in range(1, S.n + 1) for j in range(1, S.n + 1) if i != j
    )
    lines.append(f"INFO eigenpair/exclusion-set incidences over all (i, j): {hits}")
    if failed:
        lines.append(f"a theorem-backed check failed; if the violations sit on a boundary, loosen --tol (now {tol:g})")
    return lines, EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args, A):
    lines, code = verify_report(A, _oracle_cfg(args), tol=args.tol, grid=args.grid)
    _write(args, "\n".join(lines) + "\n")
    return code


COMMANDS = {
    "info": cmd_info,
    "member": cmd_member,
    "region": cmd_region,
    "certify": cmd_certify,
    "eig": cmd_eig,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensorloc", description="Eigenvalue inclusion sets for complex tensors.")
    parser.add_argument("--version", action="version", version=f"tensorloc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("tensor", help="tensor text file")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--quiet", action="store_true", help="suppress the version banner on stderr")
        return p

    add("info", "diagonal entries, radii and partial radii")

    p = add("member", "test whether a point lies in a region")
    p.add_argument("--set", default="omega")
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--z")
    p.add_argument("--tol", type=float, default=0.0)

    p = add("region", "rasterize one or more regions")
    p.add_argument("--set", default="gamma,omega", help="comma-separated region names, drawn in order")
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--tol", type=float, default=0.0)
    p.add_argument("--format", default="svg", choices=["svg", "ppm", "csv"])
    p.add_argument("--resolution", default="500x500")
    p.add_argument("--window", help="re_min,re_max,im_min,im_max")
    p.add_argument("--mark-eigs", action="store_true", help="overlay oracle eigenvalues")
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int, default=42)

    p = add("certify", "nonsingularity certificates")
    p.add_argument("--method", default="both", choices=["gersgorin", "brauer", "both"])

    p = add("eig", "eigenpairs as JSON lines")
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int, default=42)

    p = add("verify", "check every inclusion theorem against the oracle")
    p.add_argument("--starts", type=int)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--grid", type=int, default=200)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if not args.quiet:
        print(f"tensorloc {__version__}", file=sys.stderr)
    try:
        A = load_tensor(args.tensor)
        return COMMANDS[args.command](args, A)
    except (TensorFormatError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
