#pragma once

#include <array>
#include <utility>
#include <vector>

#include "algcurv/poly.hpp"

namespace algcurv {

/// A traced point near the base point, radius h away, with the residual of the
/// defining equations at the point.
struct TraceSample {
    std::vector<double> x;
    double h = 0.0;
    double residual = 0.0;
};

struct BranchTrace {
    std::vector<TraceSample> samples;
};

/// Trace one real branch of a plane curve toward the base point: for radii
/// h0, h0/2, ... a circle-constrained damped Newton projects onto {F = 0};
/// samples drifting more than 30 degrees from the direction are rejected.
std::vector<TraceSample> trace_plane_branch(const Poly& f, const std::vector<Rational>& point,
                                            const std::array<double, 2>& direction, double h0 = 1e-2,
                                            int steps = 12);

/// Fan-start variant that separates several branches sharing one tangent
/// direction; traces are grouped by the angular offset rate.
std::vector<BranchTrace> trace_plane_fan(const Poly& f, const std::vector<Rational>& point,
                                         const std::array<double, 2>& direction, double h0 = 1e-2,
                                         int steps = 12);

/// Richardson-extrapolated circumscribed-circle curvature of a traced branch;
/// estimates above 1e6 come back as infinity.
double estimate_curvature(const std::vector<TraceSample>& samples, const std::vector<Rational>& point);

std::vector<TraceSample> trace_space_branch(const Poly& f, const Poly& g, const std::vector<Rational>& point,
                                            const std::array<double, 3>& direction, double h0 = 1e-2,
                                            int steps = 12);

/// Curvature and torsion estimates from a local polynomial fit over arc length.
std::pair<double, double> estimate_frenet(const std::vector<TraceSample>& samples,
                                          const std::vector<Rational>& point);

/// Signed curvature of the normal section of {F = 0} through the plane spanned
/// by the unit normal n and the in-plane direction d; the sign follows n.
double normal_section_curvature(const Poly& f, const std::vector<Rational>& point,
                                const std::array<double, 3>& n, const std::array<double, 3>& d,
                                double h0 = 1e-2, int steps = 12);

}  // namespace algcurv
