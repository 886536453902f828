#pragma once

#include <string>
#include <vector>

#include "ratiomech/common.hpp"
#include "ratiomech/distribution.hpp"
#include "ratiomech/mechanism.hpp"

namespace ratiomech {

/// Rectangular verification mesh over [0,1] x [k_floor, 1].
struct MeshSpec {
    int nv = 50;
    int nk = 50;
    double k_floor = 1e-3;
    std::vector<double> v_nodes() const;
    std::vector<double> k_nodes() const;
};

struct FamilyResult {
    std::string family;
    double max_violation = 0.0;
    TypePoint witness_from;  // violating type
    TypePoint witness_to;    // deviation target where applicable
};

struct VerificationReport {
    std::string mode;  // "direct" or "characterization"
    double tolerance = 0.0;
    bool pass = true;
    std::vector<FamilyResult> families;

    double worst(const std::string& family) const;
    std::string to_json() const;
    std::string to_table() const;
};

/// Pairwise deviation check over all ordered mesh pairs. Grid mechanisms are
/// checked on their own mesh; closed-form mechanisms on `mesh`. Deviations
/// are deduplicated to distinct outcomes.
VerificationReport check_ic_direct(const Mechanism& m, const MeshSpec& mesh, double tol = 1e-9);

/// Truthful utility >= 0 at every mesh type, plus the p(0,1) <= 0 shortcut
/// verdict when the mechanism exposes payments at v = 0.
VerificationReport check_ir(const Mechanism& m, const MeshSpec& mesh, double tol = 1e-9);

/// The four-part characterization of IC inside the non-wasteful class:
/// C1 monotone allocation, C2 vertical and C3 diagonal cumulative
/// constraints, and the payment identity. C3 and the identity get a
/// mesh-step-aware tolerance since thresholds sampled onto a grid are only
/// located to within one cell.
VerificationReport check_characterization(const GridMechanism& m, double tol = 1e-9);

/// Direct IC pass on the mechanism's own mesh vs characterization pass.
bool equivalence_check(const GridMechanism& m, double tol = 1e-9);

/// Expected revenue as the payment integral against g.
double expected_revenue(const Mechanism& m, const Distribution& d);

/// Virtual-surplus form of revenue: integral of phi * f2 against the joint
/// density. Grid allocations are treated as piecewise linear in v.
double virtual_surplus(const Mechanism& m, const Distribution& d);

namespace detail {
/// int_threshold^1 phi(v,k) g(v|k) dv by quadrature.
double column_surplus_above(const Distribution& d, double k, double threshold);
/// Same quantity via the algebraic identity threshold * (1 - G(threshold|k)).
double column_surplus_identity(const Distribution& d, double k, double threshold);
/// int_0^1 phi(v,k) g(v|k) f2hat(v) dv with f2hat piecewise linear on v_grid.
double column_surplus_pl(const Distribution& d, double k, const std::vector<double>& v_grid,
                         const std::vector<double>& f2_col);
}  // namespace detail

}  // namespace ratiomech
