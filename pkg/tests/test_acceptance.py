"""Release gate: every acceptance criterion as one test with a printed
pass/fail line per measured quantity (run with -s to see them inline)."""

import time

import pytest

from qsdlab.acceptance import CHECKS, format_report


def _run(name, budget_s):
    start = time.monotonic()
    results = CHECKS[name]()
    elapsed = time.monotonic() - start
    print()
    print(format_report(results))
    print(f"({name}: {elapsed:.1f} s, budget {budget_s:.0f} s)")
    assert elapsed < budget_s, f"{name} exceeded its {budget_s:.0f} s runtime budget"
    failed = [r for r in results if not r.passed]
    assert not failed, "failed: " + "; ".join(
        f"{r.name} measured={r.measured:.6e} expected={r.expected:.6e} tol={r.tol:.1e}"
        for r in failed
    )


def test_ideal_limit_recovery():
    _run("ideal_limit", 10.0)


def test_markov_asymptote():
    _run("markov_asymptote", 5.0)


def test_bound_state_threshold():
    _run("bound_threshold", 5.0)


def test_bound_state_regime_asymptotics():
    _run("bound_asymptotics", 120.0)


def test_no_bound_state_regime():
    # Known-failing criterion: the exact long-time kinematics at eta=0.05
    # disagree quantitatively with the weak-coupling closed form (the exact
    # path length saturates near 24.2 against the closed-form A/kappa = 11.3,
    # so the ratio sits ~53% below the asymptote and the average speed at
    # tau=800 is still 0.03).  Kept faithful to the stated thresholds.
    _run("no_bound_regime", 120.0)


def test_oracle_equivalence_discrete_bath():
    _run("oracle_discrete_bath", 120.0)


def test_oracle_equivalence_stochastic():
    _run("oracle_stochastic", 300.0)


def test_reduced_state_hierarchy():
    _run("reduced_hierarchy", 120.0)


def test_spin_boson_pipeline():
    _run("spin_boson", 300.0)


def test_solver_convergence_order():
    _run("solver_convergence", 60.0)
