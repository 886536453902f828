"""Revenue-optimal selling mechanisms for a pair of divisible complementary goods."""

from ._ratiomech import (  # noqa: F401
    Distribution,
    GridMechanism,
    NumericConfig,
    PostedPrice,
    RatioDependent,
    RawGridMechanism,
    ThresholdCurve,
    TypePoint,
    check_condition_a,
    check_condition_b,
    check_condition_b_prime,
    check_ic_direct,
    check_ir,
    expected_revenue,
    make_ratio_dependent,
    mechanism_from_json,
    mechanism_to_json,
    non_wasteful_reduction,
    oracle_best_threshold,
    payment_from_allocation,
    phi,
    phi_zero,
    pointwise_bound,
    posted_price_rho,
    solve_condition_b,
    solve_posted_price,
    utility,
    virtual_surplus,
    zero_curve,
)
