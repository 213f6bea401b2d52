"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import contextlib
import io
import time

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from conftest import ACCEPTANCE_LINES, REMARK_ENTRIES, random_tensor
from tensorloc import (
    OracleConfig,
    Tensor,
    UsageError,
    Verdict,
    certify_brauer,
    certify_gersgorin,
    eigen_solve,
    format_tensor,
    parse_tensor,
    row_sums,
)
from tensorloc import regions as R
from tensorloc.cli import main
from tensorloc.raster import emit, pixel_centers, rasterize, read_csv

TOL = 1e-8


@contextlib.contextmanager
def criterion(label, setup=0.0):
    start = time.perf_counter() - setup
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"FAIL  {label}  ({time.perf_counter() - start:.1f}s) {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    ACCEPTANCE_LINES.append(f"PASS  {label}  ({time.perf_counter() - start:.1f}s)")


@pytest.fixture(scope="module")
def remark_pairs(remark):
    start = time.perf_counter()
    pairs = eigen_solve(remark, OracleConfig(starts=2000, seed=42))
    return pairs, time.perf_counter() - start


@pytest.fixture(scope="module")
def remark_grid(remark_sums):
    start = time.perf_counter()
    Z = pixel_centers(R.default_window(remark_sums), 500, 500)
    masks = {
        "gamma": R.gamma_contains(remark_sums, Z),
        "omega": R.omega_contains(remark_sums, Z),
        "k": R.k_contains(remark_sums, Z),
        "theta": R.theta_contains(remark_sums, Z),
    }
    return masks, time.perf_counter() - start


def test_1_remark_inclusions(remark_sums, remark_pairs):
    pairs, elapsed = remark_pairs
    with criterion("1a  Remark 2.1: oracle nonempty, residual <= 1e-10, eigenvalues in Gamma/Omega/K/Theta, < 30 s", elapsed):
        S = remark_sums
        assert pairs, "oracle returned no eigenpair"
        assert max(p.residual for p in pairs) <= 1e-10
        lams = np.array([p.lam for p in pairs])
        for f in (R.gamma_contains, R.omega_contains, R.k_contains, R.theta_contains):
            assert f(S, lams, TOL).all(), f.__name__
        assert elapsed < 30


def test_1_remark_every_exclusion_set(remark_sums, remark_pairs):
    """Literal clause: no eigenvalue in any Delta_ij or Lambda_ip."""
    with criterion("1b  Remark 2.1: no eigenvalue in any Delta_ij or Lambda_ip (all pairs)"):
        pairs, _ = remark_pairs
        S = remark_sums
        hits = []
        for p in pairs:
            for i in range(1, 5):
                for j in range(1, 5):
                    if i == j:
                        continue
                    if R.delta_ij_contains(S, i, j, p.lam, TOL):
                        hits.append(("Delta", i, j, p.lam))
                    if R.lambda_ip_contains(S, i, j, p.lam, TOL):
                        hits.append(("Lambda", i, j, p.lam))
        assert not hits, f"{len(hits)} incidences, e.g. {hits[0][0]}_{hits[0][1]}{hits[0][2]} holds {hits[0][3]:.6g}"


def test_1_remark_maximal_row_exclusion(remark_sums, remark_pairs):
    with criterion("1c  Remark 2.1: no eigenvalue in Delta_t or Lambda_t for its max-modulus row t"):
        pairs, _ = remark_pairs
        S = remark_sums
        for p in pairs:
            mags = np.abs(p.x)
            rows = np.flatnonzero(mags >= mags.max() * (1 - 1e-9)) + 1
            assert any(
                not R.delta_i_contains(S, t, p.lam, TOL) and not R.lambda_i_contains(S, t, p.lam, TOL)
                for t in rows
            ), p.lam


def test_2_inclusion_chain_grid(remark_grid):
    m, elapsed = remark_grid
    with criterion("2   500x500 grid: Omega in Gamma, Theta in K, K in Gamma; |Gamma| > |Omega|; < 10 s", elapsed):
        assert not (m["omega"] & ~m["gamma"]).any()
        assert not (m["theta"] & ~m["k"]).any()
        assert not (m["k"] & ~m["gamma"]).any()
        assert m["gamma"].sum() > m["omega"].sum()
        assert elapsed < 10


def test_3_non_nesting_witness(remark_sums, remark_grid):
    with criterion("3   grid witness of a pixel in exactly one of Theta, Omega"):
        m, _ = remark_grid
        witnesses = int((m["theta"] ^ m["omega"]).sum())
        if witnesses == 0:
            Z = pixel_centers(R.default_window(remark_sums), 2000, 2000)
            witnesses = int((R.theta_contains(remark_sums, Z) ^ R.omega_contains(remark_sums, Z)).sum())
        assert witnesses > 0


def _match_error(a, b):
    cost = np.abs(np.asarray(a)[:, None] - np.asarray(b)[None, :])
    rows, cols = linear_sum_assignment(cost)
    return cost[rows, cols].max()


def test_4_matrix_regression():
    with criterion("4   200 random 4x4 matrices: eigenvalues in Omega and Theta; Newton == exact within 1e-8; < 20 s"):
        start = time.perf_counter()
        rng = np.random.default_rng(2024)
        for _ in range(200):
            A = Tensor.from_dense(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
            S = row_sums(A)
            exact = np.array([p.lam for p in eigen_solve(A, method="exact")])
            assert R.omega_contains(S, exact, TOL).all()
            assert R.theta_contains(S, exact, TOL).all()
            newton = np.array([p.lam for p in eigen_solve(A, method="newton")])
            assert len(newton) == 4
            assert _match_error(exact, newton) <= 1e-8
        assert time.perf_counter() - start < 20


def test_5_certificate_soundness():
    with criterion("5   500 random m=3 n=3 tensors: NONSINGULAR => no |lambda| <= 1e-6; verdicts == 0-membership; < 60 s"):
        start = time.perf_counter()
        rng = np.random.default_rng(5)
        tally = {"gersgorin": 0, "brauer": 0}
        for _ in range(500):
            A = random_tensor(rng, 3, 3, boost=rng.uniform(4, 20))
            S = row_sums(A)
            g, b = certify_gersgorin(S), certify_brauer(S)
            assert g.nonsingular == (not R.omega_contains(S, 0))
            assert b.nonsingular == (not R.theta_contains(S, 0))
            tally["gersgorin"] += g.nonsingular
            tally["brauer"] += b.nonsingular
            if g.nonsingular or b.nonsingular:
                lams = np.array([p.lam for p in eigen_solve(A)])
                assert lams.size and not (np.abs(lams) <= 1e-6).any()
        assert tally["gersgorin"] > 0 and tally["brauer"] > 0
        assert tally["gersgorin"] < 500
        assert time.perf_counter() - start < 60


def test_6_trivial_cases():
    with criterion("6   diagonal, zero and n = 1 tensors, exact"):
        for m, d in [(2, [3.0, -1j, 2 + 2j]), (3, [2.0, -1.0, 0.5j]), (4, [1.0, 5.0])]:
            A = Tensor.diagonal(m, d)
            S = row_sums(A)
            lams = sorted((p.lam for p in eigen_solve(A)), key=lambda z: (z.real, z.imag))
            assert lams == sorted((complex(v) for v in d), key=lambda z: (z.real, z.imag))
            for i, v in enumerate(d):
                for f in (R.gamma_contains, R.omega_contains, R.k_contains, R.theta_contains):
                    assert f(S, v)
                    assert not f(S, v + 1e-9)
                assert R.bounding_window(S) == (
                    min(z.real for z in map(complex, d)), max(z.real for z in map(complex, d)),
                    min(z.imag for z in map(complex, d)), max(z.imag for z in map(complex, d)),
                )
        Z0 = row_sums(Tensor(3, 3, {}))
        assert certify_gersgorin(Z0).verdict is Verdict.UNKNOWN
        assert certify_brauer(Z0).verdict is Verdict.UNKNOWN
        for f in (R.gamma_contains, R.omega_contains, R.k_contains, R.theta_contains):
            assert f(Z0, 0.0)
            assert not f(Z0, 1e-9)
        one = row_sums(Tensor(3, 1, {(1, 1, 1): 4.0}))
        assert R.gamma_contains(one, 4.0) and R.omega_contains(one, 4.0)
        for fam in ("k", "theta", "k_ij", "theta_ij", "lambda_i"):
            arity = R.Family.parse(fam).arity
            with pytest.raises(UsageError):
                R.region_contains(one, R.RegionQuery(fam, (1, 2)[:arity] if arity else ()), 4.0)
        with pytest.raises(UsageError):
            certify_brauer(one)


def test_7_round_trips(remark, remark_sums, remark_path, capsysbinary):
    with criterion("7   tensor file, raster CSV and seeded eig output round-trip exactly"):
        text = remark_path.read_text()
        A = parse_tensor(text)
        assert A == remark
        assert parse_tensor(format_tensor(A)) == A
        rng = np.random.default_rng(0)
        for _ in range(20):
            B = random_tensor(rng, 3, 3, boost=2)
            assert parse_tensor(format_tensor(B)) == B

        layers = [rasterize(remark_sums, R.RegionQuery(f), 120, 90) for f in ("gamma", "omega", "k", "theta")]
        back = read_csv(emit(layers, "csv"), layers[0].window, 120, 90)
        assert all(np.array_equal(a.bitmap, b.bitmap) for a, b in zip(layers, back))

        outs = []
        for _ in range(2):
            assert main(["eig", str(remark_path), "--seed", "42", "--quiet"]) == 0
            outs.append(capsysbinary.readouterr().out)
        assert outs[0] == outs[1] and outs[0]
