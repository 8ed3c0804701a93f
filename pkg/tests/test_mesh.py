import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lagfem.mesh import (
    DualMesh, Mesh, build_mesh, evaluate_lift, gram_apply, gram_bands, gram_inner,
    interpolate_v, jump, jumps, l2_project_v, lift_to_dual, project_q, slopes, thomas_solve,
)
from oracles import hat


def test_build_mesh_nodes():
    m = build_mesh(1.0, 4)
    assert m.h == 0.25
    np.testing.assert_array_equal(m.nodes, [0, 0.25, 0.5, 0.75, 1.0])
    m = build_mesh(2.0, 2)
    assert m.h == 1.0
    np.testing.assert_array_equal(m.nodes, [0, 1, 2])


@pytest.mark.parametrize("L,N", [(1.0, 1), (1.0, 0), (0.0, 4), (-1.0, 4)])
def test_build_mesh_rejects(L, N):
    with pytest.raises(ValueError):
        build_mesh(L, N)


def test_last_node_is_exactly_L():
    m = Mesh(0.3, 7)
    assert m.nodes[-1] == 0.3


def test_project_q_examples():
    m = Mesh(1.0, 5)
    np.testing.assert_allclose(project_q(lambda x: 3.0 + 0 * x, m), 3.0)
    np.testing.assert_allclose(project_q(lambda x: x, Mesh(1.0, 2)), [0.25, 0.75], rtol=1e-15)
    # 1-element mesh is not allowed, so check x^2 on each element of N=2
    np.testing.assert_allclose(project_q(lambda x: x**2, Mesh(1.0, 2)), [1 / 12, 7 / 12], rtol=1e-14)


def test_project_q_exact_for_quintics():
    m = Mesh(2.0, 3)
    f = lambda x: x**5 - 2 * x**3 + x  # noqa: E731
    F = lambda x: x**6 / 6 - x**4 / 2 + x**2 / 2  # noqa: E731
    expect = (F(m.nodes[1:]) - F(m.nodes[:-1])) / m.h
    np.testing.assert_allclose(project_q(f, m), expect, rtol=1e-13)


def test_interpolate_v_examples():
    np.testing.assert_allclose(interpolate_v(lambda x: x, Mesh(1.0, 2)), [0, 0.5, 1])
    v = interpolate_v(lambda x: np.sin(np.pi * x), Mesh(1.0, 2))
    np.testing.assert_allclose(v, [0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(interpolate_v(lambda x: 2.0, Mesh(1.0, 3)), 2.0)


def test_l2_projection_zero_and_idempotent():
    m = Mesh(1.0, 6)
    np.testing.assert_array_equal(l2_project_v(lambda x: 0 * x, m), 0)
    v = np.array([0.3, -1.0, 2.0, 0.5, 0.0, 1.2, -0.4])
    f = lambda x: np.interp(x, m.nodes, v)  # noqa: E731
    np.testing.assert_allclose(l2_project_v(f, m), v, atol=1e-13)


def test_constrained_projection_of_one():
    # N=2 on (0,1): identity boundary rows, middle row (h/6, 2h/3, h/6).u = h
    m = Mesh(1.0, 2)
    A = np.array([[1, 0, 0], [m.h / 6, 2 * m.h / 3, m.h / 6], [0, 0, 1]])
    b = np.array([0, m.h, 0])
    expect = np.linalg.solve(A, b)
    got = l2_project_v(lambda x: 1.0 + 0 * x, m, zero_boundary=True)
    np.testing.assert_allclose(got, expect, rtol=1e-14)
    assert got[1] == pytest.approx(1.5)


def test_constrained_projection_is_orthogonal():
    m = Mesh(1.0, 8)
    f = lambda x: np.exp(x) * np.cos(3 * x)  # noqa: E731
    u = l2_project_v(f, m, zero_boundary=True)
    xq = m.quadrature_points
    w = np.broadcast_to(0.5 * m.h * np.array([5, 8, 5]) / 9, xq.shape)
    resid = np.interp(xq, m.nodes, u) - f(xq)
    for i in range(1, m.N):
        v, _ = hat(i, xq, m.nodes)
        assert abs(np.sum(w * resid * v)) < 1e-14


def test_gram_matches_quadrature():
    m = Mesh(1.5, 5)
    sub, diag, sup = gram_bands(m)
    M = np.diag(diag) + np.diag(sub, -1) + np.diag(sup, 1)
    xq = m.quadrature_points
    w = np.broadcast_to(0.5 * m.h * np.array([5, 8, 5]) / 9, xq.shape)
    dense = np.zeros((m.N + 1, m.N + 1))
    for i in range(m.N + 1):
        vi, _ = hat(i, xq, m.nodes)
        for j in range(m.N + 1):
            vj, _ = hat(j, xq, m.nodes)
            dense[i, j] = np.sum(w * vi * vj)
    np.testing.assert_allclose(M, dense, atol=1e-15)
    a = np.arange(m.N + 1.0)
    np.testing.assert_allclose(gram_apply(a, m), dense @ a, atol=1e-14)
    assert gram_inner(a, a, m) == pytest.approx(a @ dense @ a)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_thomas_matches_dense(n, seed):
    rng = np.random.default_rng(seed)
    diag = rng.uniform(3, 5, n)
    sub = rng.uniform(-1, 1, max(n - 1, 0))
    sup = rng.uniform(-1, 1, max(n - 1, 0))
    rhs = rng.normal(size=n)
    A = np.diag(diag) + np.diag(sub, -1) + np.diag(sup, 1)
    np.testing.assert_allclose(thomas_solve(sub, diag, sup, rhs), np.linalg.solve(A, rhs), rtol=1e-12, atol=1e-13)


def test_jump_examples():
    assert jump(np.array([1.0, 1.0, 1.0]), 1) == 0
    assert jump(np.array([1.0, 3.0]), 1) == 2
    assert jump(np.array([2.0, -1.0, 5.0]), 2) == 6
    np.testing.assert_array_equal(jumps(np.array([2.0, -1.0, 5.0])), [-3, 6])
    for bad in (0, 3):
        with pytest.raises(IndexError):
            jump(np.array([2.0, -1.0, 5.0]), bad)


def test_slopes():
    m = Mesh(2.0, 2)
    np.testing.assert_array_equal(slopes(np.array([0.0, 1.0, 0.0]), m), [1, -1])


def test_dual_mesh_vertices():
    np.testing.assert_allclose(DualMesh(Mesh(3.0, 3)).vertices, [0, 0.5, 1.5, 2.5, 3])


def test_lift_constant():
    m = Mesh(1.0, 4)
    q = np.full(4, 2.5)
    _, vals = lift_to_dual(q, m)
    np.testing.assert_array_equal(vals, 2.5)
    x = np.linspace(0, 1, 17)
    np.testing.assert_array_equal(evaluate_lift(q, m, x), 2.5)


def test_lift_one_jump():
    m = Mesh(2.0, 2)
    q = np.array([1.0, 3.0])
    x = np.array([0.0, 0.25, 0.5, 1.0, 1.5, 1.75, 2.0])
    np.testing.assert_allclose(evaluate_lift(q, m, x), [1, 1, 1, 2, 3, 3, 3])
    verts, vals = lift_to_dual(q, m)
    slope = np.diff(vals) / np.diff(verts)
    np.testing.assert_allclose(slope, [0, 2, 0])


def test_lift_two_jumps():
    m = Mesh(3.0, 3)
    q = np.array([1.0, 2.0, 4.0])
    verts, vals = lift_to_dual(q, m)
    slope = np.diff(vals) / np.diff(verts)
    np.testing.assert_allclose(slope[1:-1], [1, 2])
    # direct evaluation at the dual vertices reproduces element values
    np.testing.assert_allclose(evaluate_lift(q, m, m.centers), q)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=2, max_size=20))
def test_lift_slopes_are_scaled_jumps(values):
    q = np.array(values)
    m = Mesh(1.0, len(q))
    verts, vals = lift_to_dual(q, m)
    slope = np.diff(vals) / np.diff(verts)
    np.testing.assert_allclose(slope[1:-1], jumps(q) / m.h, rtol=1e-9, atol=1e-9)
    assert slope[0] == 0 and slope[-1] == 0


def test_check_sizes():
    m = Mesh(1.0, 3)
    with pytest.raises(ValueError):
        m.check_q(np.zeros(4))
    with pytest.raises(ValueError):
        m.check_v(np.zeros(3))
