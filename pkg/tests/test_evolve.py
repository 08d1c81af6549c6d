"""Chain evolution: invariants, closed-form agreement, window policy."""

import math

import numpy as np
import pytest

from krylovchain import (
    Constant,
    ConstantWithFirst,
    EvolveConfig,
    Explicit,
    ResourceLimitError,
    SqrtGrowth,
    Su2,
    SykLike,
    WaveState,
    active_window_policy,
    evolve,
    rhs,
)
from krylovchain.closedforms import (
    bessel_chain_wavefunction,
    coherent_wavefunction,
    su2_wavefunction,
    syk_wavefunction,
)


def make_state(amps, t=0.0, tail=0.0):
    amps = np.asarray(amps, dtype=float)
    return WaveState(
        t=t,
        amplitudes=amps,
        active_size=len(amps),
        norm_error=abs(float(np.sum(amps ** 2)) - 1.0),
        tail_mass=tail,
    )


class TestRhs:
    def test_initial_kick(self):
        st = make_state([1.0, 0.0, 0.0, 0.0])
        d = rhs(st, SykLike(1.0, 1.0))
        assert d[0] == 0.0
        assert d[1] == pytest.approx(1.0)  # b_1 * phi_0
        assert np.all(d[2:] == 0.0)

    def test_linearity_zero_state(self):
        st = make_state([0.0, 0.0, 0.0])
        assert np.all(rhs(st, Constant(2.0)) == 0.0)

    def test_single_frequency_rotation(self):
        w = 1.3
        t = 0.4
        st = make_state([math.cos(w * t), math.sin(w * t)], t=t)
        d = rhs(st, Explicit((w,)))
        assert d[0] == pytest.approx(-w * math.sin(w * t), abs=1e-14)
        assert d[1] == pytest.approx(w * math.cos(w * t), abs=1e-14)

    def test_antisymmetry_conserves_norm_rate(self):
        rng = np.random.default_rng(3)
        y = rng.normal(size=24)
        y /= np.linalg.norm(y)
        st = make_state(y)
        d = rhs(st, SqrtGrowth(1.0))
        assert abs(float(y @ d)) < 1e-13


class TestEvolveBasics:
    def test_initial_condition(self):
        cfg = EvolveConfig(t_max=1.0, samples=4)
        first = next(iter(evolve(SykLike(1.0, 1.0), cfg)))
        assert first.t == 0.0
        assert first.amplitudes[0] == 1.0
        assert np.all(first.amplitudes[1:] == 0.0)

    def test_single_site_rotation_tight(self):
        # phi_0 = cos(wt), phi_1 = sin(wt); at t = pi/2 the state sits on site 1
        cfg = EvolveConfig(
            t_max=math.pi / 2, samples=10, method="rk45", rel_tol=1e-12, abs_tol=1e-14
        )
        st = list(evolve(Explicit((1.0,)), cfg))[-1]
        assert abs(st.amplitudes[0]) < 1e-9
        assert abs(st.amplitudes[1] - 1.0) < 1e-9

    def test_syk_phi0_value(self):
        cfg = EvolveConfig(t_max=1.0, samples=4)
        st = list(evolve(SykLike(1.0, 1.0), cfg))[-1]
        assert st.amplitudes[0] == pytest.approx(1.0 / math.cosh(1.0), abs=1e-7)

    def test_log_sample_grid(self):
        cfg = EvolveConfig(t_max=10.0, samples=12, grid="log", log_decades=2.0)
        ts = cfg.resolve_sample_times()
        assert ts[0] == 0.0 and ts[1] == pytest.approx(0.1) and ts[-1] == 10.0

    def test_explicit_sample_times(self):
        cfg = EvolveConfig(t_max=2.0, sample_times=(0.0, 0.5, 2.0))
        states = list(evolve(Constant(1.0), cfg))
        assert [s.t for s in states] == [0.0, 0.5, 2.0]


CLOSED_FORMS = [
    ("syk_eta1", SykLike(1.0, 1.0), lambda n, t: syk_wavefunction(1.0, 1.0, n, t)),
    ("syk_eta2", SykLike(1.0, 2.0), lambda n, t: syk_wavefunction(1.0, 2.0, n, t)),
    ("coherent", SqrtGrowth(1.0), lambda n, t: coherent_wavefunction(1.0, n, t)),
    ("su2_j2", Su2(1.0, 2.0), lambda n, t: su2_wavefunction(1.0, 2.0, n, t)),
    (
        "bessel_a",
        Constant(0.5),
        lambda n, t: bessel_chain_wavefunction("A", 1.0, n, t),
    ),
    (
        "bessel_b",
        ConstantWithFirst(1.0 / math.sqrt(2.0), 0.5),
        lambda n, t: bessel_chain_wavefunction("B", 1.0, n, t),
    ),
    ("explicit_k1", Explicit((1.0,)), lambda n, t: [math.cos(t), math.sin(t)][n]),
]


@pytest.mark.parametrize("name,seq,exact", CLOSED_FORMS, ids=[c[0] for c in CLOSED_FORMS])
def test_oracle_agreement_small_horizon(name, seq, exact):
    # |phi_n(numeric) - phi_n(closed form)| <= 1e-6 for t <= 5, n <= 50
    cfg = EvolveConfig(t_max=5.0, samples=10)
    worst = 0.0
    for st in evolve(seq, cfg):
        hi = min(50, st.active_size)
        ref = np.array([exact(n, st.t) for n in range(hi)])
        worst = max(worst, float(np.max(np.abs(st.amplitudes[:hi] - ref))))
    assert worst < 1e-6, f"{name}: {worst:.2e}"


@pytest.mark.parametrize(
    "seq,t_max",
    [
        (SykLike(1.0, 1.0), 5.0),
        (SqrtGrowth(1.0), 20.0),
        (Su2(1.0, 2.0), 20.0),
        (Constant(1.0), 20.0),
        (Explicit((1.0, 0.7)), 20.0),
    ],
)
def test_norm_conservation(seq, t_max):
    cfg = EvolveConfig(t_max=t_max, samples=25)
    for st in evolve(seq, cfg):
        assert st.norm_error <= 1e-9
        assert st.tail_mass <= cfg.truncation_tol


def test_rk45_cross_check():
    cfg_t = EvolveConfig(t_max=2.0, samples=5)
    cfg_r = EvolveConfig(t_max=2.0, samples=5, method="rk45")
    for st_t, st_r in zip(evolve(SykLike(1.0, 1.0), cfg_t), evolve(SykLike(1.0, 1.0), cfg_r)):
        hi = min(st_t.active_size, st_r.active_size)
        assert np.max(np.abs(st_t.amplitudes[:hi] - st_r.amplitudes[:hi])) < 1e-6


def test_time_reversal():
    # flipping the sign of odd sites conjugates the generator to its negative,
    # so evolve -> flip -> evolve -> flip must return to the initial state
    cfg = EvolveConfig(t_max=2.0, samples=2)
    final = list(evolve(SykLike(1.0, 1.0), cfg))[-1]
    flipped = final.amplitudes.copy()
    flipped[1::2] *= -1.0
    back = list(evolve(SykLike(1.0, 1.0), cfg, initial=flipped))[-1].amplitudes.copy()
    back[1::2] *= -1.0
    assert abs(back[0] - 1.0) < 1e-6
    assert np.max(np.abs(back[1:])) < 1e-6


def test_phi0_parity():
    # phi_0(t) is even in t; checked by a genuine small negative-time
    # integration with the low-level Cayley update
    from krylovchain.evolve import _TrapezoidalStepper, _Window

    cfg = EvolveConfig(t_max=1.0, samples=2)
    runs = {}
    for sign in (+1.0, -1.0):
        w = _Window(SqrtGrowth(1.0), cfg, None)
        w.resize(80)
        stp = _TrapezoidalStepper(w, cfg)
        for _ in range(500):
            w.y = stp._apply(sign * 1e-3, w.y)
        runs[sign] = w.y.copy()
    pos, neg = runs[1.0], runs[-1.0]
    assert neg[0] == pytest.approx(pos[0], abs=1e-12)
    # and site parity phi_n(-t) = (-1)^n phi_n(t)
    signs = (-1.0) ** np.arange(len(pos))
    assert np.max(np.abs(neg - signs * pos)) < 1e-12
    # quadratic small-t law: 1 - phi_0(t) -> mu_2 t^2 / 2
    small = EvolveConfig(t_max=1e-3, samples=2)
    st = list(evolve(SqrtGrowth(1.0), small))[-1]
    assert 1.0 - st.amplitudes[0] == pytest.approx(0.5 * 1e-6, rel=1e-3)


def test_truncation_insensitivity():
    base = EvolveConfig(t_max=3.0, samples=6)
    wide = EvolveConfig(t_max=3.0, samples=6, guard_band=16)
    c_base = [float(np.sum(np.arange(s.active_size) * s.amplitudes ** 2)) for s in evolve(SykLike(1.0, 1.0), base)]
    c_wide = [float(np.sum(np.arange(s.active_size) * s.amplitudes ** 2)) for s in evolve(SykLike(1.0, 1.0), wide)]
    for a, b in zip(c_base[1:], c_wide[1:]):
        assert abs(a - b) / abs(b) < 1e-8


def test_finite_chain_window_never_exceeds_support():
    cfg = EvolveConfig(t_max=30.0, samples=10)
    for st in evolve(Su2(1.0, 2.0), cfg):
        assert st.active_size <= 5
        assert st.tail_mass == 0.0


def test_resource_limit_reports_time():
    cfg = EvolveConfig(t_max=6.0, samples=12, max_active_size=64)
    with pytest.raises(ResourceLimitError) as info:
        list(evolve(SykLike(1.0, 1.0), cfg))
    assert 0.0 < info.value.t_reached < 6.0
    assert info.value.max_active_size == 64


class TestWindowPolicy:
    CFG = EvolveConfig(t_max=1.0, truncation_tol=1e-12, max_active_size=1000)

    def test_no_growth_below_tolerance(self):
        st = make_state(np.ones(100) / 10.0, tail=0.0)
        assert active_window_policy(st, self.CFG) == 100

    def test_multiplicative_growth(self):
        st = make_state(np.ones(100) / 10.0, tail=1e-6)
        assert active_window_policy(st, self.CFG) == 150

    def test_clamped_at_max(self):
        cfg = EvolveConfig(t_max=1.0, truncation_tol=1e-12, max_active_size=120)
        st = make_state(np.ones(100) / 10.0, tail=1e-6)
        assert active_window_policy(st, cfg) == 120

    def test_never_shrinks_below_occupied(self):
        amps = np.zeros(100)
        amps[0] = 1.0
        amps[90] = 1e-3
        cfg = EvolveConfig(t_max=1.0, truncation_tol=1e-12, max_active_size=105, growth_factor=1.01)
        st = make_state(amps, tail=1e-6)
        assert active_window_policy(st, cfg) >= 91


def test_config_validation():
    with pytest.raises(ValueError):
        EvolveConfig(t_max=0.0)
    with pytest.raises(ValueError):
        EvolveConfig(t_max=1.0, guard_band=2)
    with pytest.raises(ValueError):
        EvolveConfig(t_max=1.0, rel_tol=2.0)
    with pytest.raises(ValueError):
        EvolveConfig(t_max=1.0, method="verlet")
    with pytest.raises(ValueError):
        EvolveConfig(t_max=1.0, sample_times=(0.5, 0.2)).resolve_sample_times()


def test_states_are_read_only():
    cfg = EvolveConfig(t_max=0.5, samples=2)
    st = list(evolve(Constant(1.0), cfg))[-1]
    with pytest.raises(ValueError):
        st.amplitudes[0] = 5.0
