#ifndef OGP_LANDSCAPE_HPP
#define OGP_LANDSCAPE_HPP

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace ogp {

/// A point of the box [-1,1]^4.
using BoxPoint4 = std::array<double, 4>;

/// f(x,y,z,w) = x + y - z - w + xy + zw + (3/4)(x+y)(z+w).
double f_multilinear(const BoxPoint4& p);
BoxPoint4 grad_f(const BoxPoint4& p);

struct FlowTrajectory {
    std::vector<double> times;
    std::vector<BoxPoint4> points;
    double first_contact_time = -1;  ///< interpolated time of the first boundary contact; -1 if none
    BoxPoint4 first_contact_point{};
    double stationary_from = -1;     ///< first time the projected velocity vanished; -1 if never
};

/**
 * Explicit Euler on dx/dt = grad f with the velocity projected onto the tangent cone of the
 * box at active faces. The projection is coordinatewise, which is exact for a box only.
 * Records every `record_every`-th step. Throws ParameterError for a start outside the box
 * or non-positive dt.
 */
FlowTrajectory projected_gradient_flow(const BoxPoint4& start, double dt, double t_max, int record_every = 1);

/**
 * Values of a set function on {-1,1}^d; entry `mask` is the value at the vertex with
 * coordinate i equal to +1 exactly when bit i of mask is set.
 */
using VertexTable = std::vector<double>;

/// Tabulates a function on the vertices of [-1,1]^d. Throws TooLargeError for d > 20.
VertexTable vertex_table(const std::function<double(std::span<const double>)>& f, int d);

/// Lovasz extension (1/2) int_{-1}^{1} f(sign vector of {x_i >= t}) dt, by the sorted-threshold chain.
double lovasz_extension(const VertexTable& values, std::span<const double> p);

/// Gradient of the extension on the linear piece selected by sorting p (a supergradient where it is concave).
std::vector<double> lovasz_supergradient(const VertexTable& values, std::span<const double> p);

struct AscentResult {
    std::vector<double> point;  ///< best point seen
    double value = 0;
    int iterations = 0;
};

/// Projected supergradient ascent with step / sqrt(k); returns the best iterate.
AscentResult lovasz_subgrad_ascent(const VertexTable& values, std::span<const double> p0, double step, int iters);

/// f applied to the four block means of a vector of length 4m (blocks x, y, z, w in order).
double f_m_highdim(std::span<const double> x);

/// Zero-temperature Franz-Parisi potential -(4 r^2 - 2|r| + 3).
double f_infinity(double r);

/**
 * max f over K(r) = {p in [-1,1]^4 : mean(p) = r} by nested grid refinement over (x, y, z)
 * with w determined by the constraint. f is concave on every slice, so refinement around
 * the best grid point converges to the maximum.
 */
double constrained_max_bruteforce(double r, int grid = 41, int rounds = 12);

struct IsingFppPoint {
    double r = 0;        ///< requested overlap
    double r_sector = 0; ///< nearest achievable overlap (2K - 4m) / (4m)
    double value = 0;    ///< -(1/(beta m)) log Z_K
};

/**
 * Finite-(beta, m) Franz-Parisi potential of the mean-field Ising model exp(beta m f_m),
 * centred at the all-ones configuration, so the overlap of x' is its total mean.
 * Sectors are summed exactly with log binomials. The pair structure of f reduces the
 * sum over the four block magnetizations to O(m^2). Throws ParameterError for m > 2000.
 */
std::vector<IsingFppPoint> ising_fpp(int m, double beta, std::span<const double> r_grid);

/// Local minima of a sampled curve, endpoints included (one-sided comparison there). A flat
/// run lower than both its neighbors counts once, at its first index.
std::vector<std::size_t> local_minima(std::span<const double> values);

}  // namespace ogp

#endif
