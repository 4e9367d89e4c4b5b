#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "orthospec/families.hpp"

namespace orthospec {

enum class MapKind { Identity, LogFinite, LogSemi, SinhLogSemi };

// A quadrature point with its distances to the ends of the mapped interval
// (infinite when the interval is unbounded on that side).
struct SincPoint {
    double x = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

struct ConformalMap {
    MapKind kind = MapKind::LogFinite;
    double a = -1.0;
    double b = 1.0;
    // Semi-infinite maps only: when set, the interval is (-inf, a) and x = a - u(t).
    bool reflected = false;

    static ConformalMap identity() { return {MapKind::Identity, 0.0, 0.0, false}; }
    static ConformalMap log_finite(double a, double b);
    static ConformalMap log_semi(double a) { return {MapKind::LogSemi, a, 0.0, false}; }
    static ConformalMap sinh_log_semi(double a) { return {MapKind::SinhLogSemi, a, 0.0, false}; }
    static ConformalMap sinh_log_left(double b) { return {MapKind::SinhLogSemi, b, 0.0, true}; }

    double forward(double x) const;
    // Uses the stored endpoint distances, so it stays accurate next to an endpoint.
    double forward(const SincPoint& p) const;
    SincPoint inverse(double t) const;
    // 1/phi'(x) at x = inverse(t).
    double inv_derivative(double t) const;
    std::string name() const;
};

struct QuadratureConfig {
    int N = 128;
    double h = 0.0;  // 0 means pi/sqrt(N)
    ConformalMap map;

    double step() const;
    // Default map for an interval: log map when finite, sinh-log when semi-infinite, identity on R.
    static QuadratureConfig for_interval(const Interval& iv, int N);
};

std::vector<double> sinc_nodes(const QuadratureConfig& cfg);
double sinc_quad(const std::function<double(const SincPoint&)>& f, const QuadratureConfig& cfg);
double sinc_quad(const std::function<double(double)>& f, const QuadratureConfig& cfg);

struct QuadErrorPoint {
    int N = 0;
    double error = 0.0;
};

struct QuadErrorCurve {
    std::vector<QuadErrorPoint> points;
    double slope = 0.0;      // of log(err / sqrt(N)) against sqrt(N)
    double intercept = 0.0;
    double r2 = 0.0;
    int fitted = 0;          // points above the rounding floor, used in the fit
    double floor = 0.0;      // 64 eps max(1, |exact|)
};

QuadErrorCurve quad_error_curve(const std::function<double(const SincPoint&)>& f, double exact,
                                const ConformalMap& map, const std::vector<int>& Ns);

// Nodes (b e^{kh} + a)/(1 + e^{kh}), k = -M..N.
NodeSet polysinc_nodes(double a, double b, int M, int N);

}  // namespace orthospec
