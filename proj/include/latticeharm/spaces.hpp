#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "latticeharm/series.hpp"
#include "latticeharm/stft.hpp"

namespace latticeharm {

/// Moderate weight family. Polynomial(t) is the bracket weight <xi>^t =
/// (1+|xi|^2)^{t/2}; SubExponential(r,s) is e^{r|xi|^{1/s}}, restricted to
/// s >= 1 so that a submultiplicative companion exists; Product multiplies
/// factors. Each family ships its companion weight v and the constant of
/// the moderate bound omega(x+y) <= C * omega(x) v(y).
class WeightSpec {
public:
    enum class Kind { Polynomial, SubExponential, Product };

    static WeightSpec polynomial(double t);
    static WeightSpec sub_exponential(double r, double s);
    static WeightSpec product(std::vector<WeightSpec> factors);

    Kind kind() const { return kind_; }
    double t() const { return t_; }
    double r() const { return r_; }
    double s() const { return s_; }
    const std::vector<WeightSpec>& factors() const { return factors_; }

    double eval(const Eigen::VectorXd& xi) const { return eval_radial(xi.norm()); }
    double eval_radial(double rho) const;

    /// The family's submultiplicative companion v.
    WeightSpec companion() const;
    /// Constant of omega(x+y) <= C * omega(x) * companion(y).
    double moderate_constant() const;
    /// 1/omega within the same family.
    WeightSpec inverse() const;

private:
    WeightSpec() = default;
    Kind kind_ = Kind::Polynomial;
    double t_ = 0.0;
    double r_ = 0.0;
    double s_ = 1.0;
    std::vector<WeightSpec> factors_;
};

struct ModerateReport {
    bool ok = false;
    double worst_constant = 0.0;
};

/// Monte Carlo check of the moderate bound: the maximum of
/// omega(x+y) / (omega(x) v(y)) over `samples` pairs drawn uniformly from
/// the ball |.| <= radius, compared against omega's declared constant
/// (times 1.01 slack).
ModerateReport moderate_check(const WeightSpec& omega, const WeightSpec& v, int dim, double radius,
                              std::size_t samples, std::uint64_t seed);

/// Exponent vector q in (0, inf]^d (use kInfExponent for the sup norm) plus
/// the axis permutation tau: stage k of the nested norm reduces original
/// axis tau[k] with exponent q[k].
struct MixedNormSpec {
    std::vector<double> q;
    std::vector<std::size_t> tau;  ///< 0-based permutation of {0..d-1}

    static MixedNormSpec uniform(int dim, double exponent);
    void validate(int dim) const;
};

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

/// Nested sequence norm of a finite coefficient map on the dual lattice:
/// b_0 = |a| arranged along the permuted axes, then one l^{q_k} reduction
/// per stage (quasi-norm for q_k < 1, supremum for q_k = inf). Empty
/// support gives 0.
double mixed_seq_norm(const std::map<IndexVec, Complex>& coeffs, const MixedNormSpec& spec);

/// Norm of {c(f,alpha) * omega(point(alpha))} in the mixed sequence space.
double periodic_space_norm(const FourierSeries& f, const WeightSpec& omega,
                           const MixedNormSpec& spec);

/// Discretized modulation norms with a Gaussian window: M takes the max of
/// |V_phi f| over the periodic x-grid first and then the weighted mixed
/// L^q norm over the xi-grid (rectangle rule, one spacing^{1/q_k} factor
/// per reduced axis); W takes the xi-norm first and the x-max last.
double modulation_norm_M(const FourierSeries& f, const WeightSpec& omega,
                         const MixedNormSpec& spec, const GaussianWindow& window,
                         const StftGridSpec& grid);
double modulation_norm_W(const FourierSeries& f, const WeightSpec& omega,
                         const MixedNormSpec& spec, const GaussianWindow& window,
                         const StftGridSpec& grid);

struct DualityReport {
    Complex pairing{0.0, 0.0};  ///< bilinear <f, g>_E
    double bound = 0.0;         ///< ||f||_{E(omega, l^q)} * ||g||_{E(1/omega, l^{q'})}
    double ratio = 0.0;         ///< |pairing| / bound (0 when the bound vanishes)
};

/// Hoelder bound of the duality pairing; q is a scalar exponent in [1, inf]
/// shared by all axes, q' its conjugate.
DualityReport duality_gap(const FourierSeries& f, const FourierSeries& g, const WeightSpec& omega,
                          double q);

/// Extremal dual partner for q in (1, inf):
///   c(g,alpha) = conj(phase c(f,alpha)) * |c(f,alpha) omega(alpha)|^{q-1} * omega(alpha),
/// scaled to unit dual norm; duality_gap(f, witness) attains ratio 1 up to
/// roundoff. Throws ZeroSeries on empty input.
FourierSeries dual_witness(const FourierSeries& f, const WeightSpec& omega, double q);

}  // namespace latticeharm
