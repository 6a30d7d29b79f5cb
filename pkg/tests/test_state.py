import numpy as np
import pytest

from phasewalk import coins as cn
from phasewalk import evolution as ev
from phasewalk import state as st


def test_initial_state_d2():
    w = st.new_initial_state(2)
    assert set(w.amplitudes) == {(0, 0)}
    np.testing.assert_allclose(w.amplitudes[(0, 0)], 0.5 + 0j)


@pytest.mark.parametrize("d,expected", [(1, 1 / np.sqrt(2)), (3, 1 / np.sqrt(6))])
def test_initial_state_normalization(d, expected):
    w = st.new_initial_state(d)
    vec = w.amplitudes[(0,) * d]
    assert len(vec) == 2 * d
    np.testing.assert_allclose(vec, expected)
    assert st.norm(w) == pytest.approx(1.0, abs=1e-12)


def test_initial_state_rejects_d0():
    with pytest.raises(ValueError):
        st.new_initial_state(0)


def test_initial_coin_state_basis():
    w = st.new_initial_state_with_coin_state(2, [1, 0, 0, 0])
    assert w.amplitude((0, 0), 0) == 1
    assert w.amplitude((0, 0), 1) == 0


def test_initial_coin_state_uniform_matches_default():
    w = st.new_initial_state_with_coin_state(2, [0.5] * 4)
    ref = st.new_initial_state(2)
    np.testing.assert_allclose(w.amplitudes[(0, 0)], ref.amplitudes[(0, 0)])


def test_initial_coin_state_inverse_fourier():
    # F^dag applied to the uniform vector, computed by direct matrix-vector
    # product, is a valid (unit norm) coin state
    f = cn.fourier_coin(4)
    vec = f.conj().T @ np.full(4, 0.5)
    w = st.new_initial_state_with_coin_state(2, vec)
    np.testing.assert_allclose(w.amplitudes[(0, 0)], vec)


def test_initial_coin_state_rejects_unnormalized():
    with pytest.raises(ValueError):
        st.new_initial_state_with_coin_state(2, [1, 1, 0, 0])


def test_norm_scaling_and_empty():
    w = st.new_initial_state(2)
    w.amplitudes[(0, 0)] *= 2.0
    assert st.norm(w) == pytest.approx(2.0)
    assert st.norm(st.WalkState(2)) == 0.0


def test_position_distribution_initial():
    dist = st.position_distribution(st.new_initial_state(2))
    assert dist.mass == {(0, 0): pytest.approx(1.0)}


def test_position_distribution_one_grover_step():
    cfg = ev.StepConfig(2, cn.grover_coin(4))
    w = ev.step(st.new_initial_state(2), cfg)
    dist = st.position_distribution(w)
    assert set(dist.mass) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    for p in dist.mass.values():
        assert p == pytest.approx(0.25, abs=1e-12)
    assert dist.total() == pytest.approx(1.0, abs=1e-10)


def test_second_moment_examples():
    assert st.second_moment(st.Distribution(2, {(0, 0): 1.0})) == 0.0
    assert st.second_moment(st.Distribution(1, {(1,): 0.5, (-1,): 0.5})) == pytest.approx(1.0)


def test_second_moment_crw_equals_n():
    from phasewalk.classical import crw_distribution

    for n in (3, 8):
        assert st.second_moment(crw_distribution(2, n)) == pytest.approx(n, abs=1e-10)


def test_support_parity_invariant():
    cfg = ev.StepConfig(2, cn.grover_coin(4))
    w = st.new_initial_state(2)
    for n in range(1, 8):
        w = ev.step(w, cfg)
        for x in w.amplitudes:
            l1 = sum(abs(c) for c in x)
            assert l1 <= n
            assert (n - l1) % 2 == 0


def test_second_moment_bounded_by_n_squared():
    cfg = ev.StepConfig(2, cn.grover_coin(4))
    w = st.new_initial_state(2)
    for n in range(1, 10):
        w = ev.step(w, cfg)
        m = st.second_moment(st.position_distribution(w))
        assert 0.0 <= m <= n * n + 1e-9


def test_direction_helpers():
    assert st.direction_vector(2, 0) == (1, 0)
    assert st.direction_vector(2, 1) == (-1, 0)
    assert st.direction_vector(2, 3) == (0, -1)
    assert st.opposite(2) == 3
    with pytest.raises(ValueError):
        st.direction_vector(2, 4)


def test_total_variation():
    p = st.Distribution(1, {(0,): 1.0})
    q = st.Distribution(1, {(1,): 1.0})
    assert st.total_variation(p, q) == pytest.approx(1.0)
    assert st.total_variation(p, p) == 0.0
