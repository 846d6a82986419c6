#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "shocksim/multi_index.hpp"
#include "shocksim/vec.hpp"

namespace shocksim::family {

/// Order-3 seed of a stationary profile: the symmetric 3-tensor entries
/// A_alpha for |alpha| = 3. The 2x2 block A_{1jk} (j,k in {2,3}) together
/// with A_{111} must form a positive definite matrix M = A_{1jk}.
struct FamilySpec {
    // one entry per multi-index of order 3, in the canonical ordering of
    // multi_indices_up_to(3) restricted to order 3:
    // 300,210,201,120,111,102,030,021,012,003
    std::array<double, 10> A{};

    static int slot(const MultiIndex& a);  // order-3 index -> 0..9
    double at(const MultiIndex& a) const { return A[static_cast<std::size_t>(slot(a))]; }
    double& at(const MultiIndex& a) { return A[static_cast<std::size_t>(slot(a))]; }

    /// M_{jk} = A entries with one 1-index: rows/cols over {1,2,3}.
    Sym3 second_seed_matrix() const;

    /// Third-order jet of the closed-form profile bar_w: A_300 = 6,
    /// A_120 = A_102 = 2, all else zero.
    static FamilySpec bar_w_seed();
};

/// Taylor coefficients a_alpha of a stationary profile, dense up to
/// max_order, plus the certified growth constant D.
class CoeffTable {
public:
    CoeffTable(int max_order, double growth_d)
        : max_order_(max_order), growth_d_(growth_d),
          index_(multi_indices_up_to(max_order)),
          coeffs_(index_.size(), 0.0) {}

    int max_order() const { return max_order_; }
    double growth_d() const { return growth_d_; }
    double convergence_radius() const { return 1.0 / (8.0 * growth_d_); }

    double coeff(const MultiIndex& a) const;
    void set_coeff(const MultiIndex& a, double v);
    const std::vector<MultiIndex>& indices() const { return index_; }

    /// Series value at y (|y| <= convergence_radius, else OutOfRadius).
    double eval(const Vec3& y) const;
    /// Partial-sum value with no radius gate; oracle and residual work.
    double eval_unchecked(const Vec3& y) const;
    Vec3 grad_unchecked(const Vec3& y) const;
    /// Geometric bound on the truncation tail at y.
    double tail_bound(const Vec3& y) const;

private:
    int flat(const MultiIndex& a) const;

    int max_order_;
    double growth_d_;
    std::vector<MultiIndex> index_;
    std::vector<double> coeffs_;
};

/// Appendix-style recursion for a_alpha from the order-3 seed. growth_D is
/// chosen as the smallest power of two >= 512 that certifies the bound at
/// order 3. Throws DegenerateFamily when M = A_{1jk} is not SPD.
CoeffTable taylor_coeffs(const FamilySpec& spec, int max_order);

struct CatalanReport {
    // per order 2..N: max over alpha of |a|/(C_a1 C_a2 C_a3 D^{|a|-2})
    std::vector<double> per_order_max;
    double worst = 0.0;
    std::optional<MultiIndex> worst_index;
};

/// Verifies |a_alpha| <= C_{a1}C_{a2}C_{a3} D^{|alpha|-2} for all orders
/// 2..max_order; throws BoundViolated when any ratio exceeds 1.
CatalanReport certify_catalan(const CoeffTable& table);

struct TrajectoryOptions {
    double shell_radius = -1.0;   // default r0/2
    double rel_tol = 1e-10;
    double max_step = 0.25;
    std::size_t max_steps = 200000;
};

/// Global evaluation beyond the series radius: integrate the characteristic
/// flow backwards from y to the series shell and rescale the landing value.
double extend_by_trajectory(const CoeffTable& table, const Vec3& y,
                            const TrajectoryOptions& opt = {});

/// Largest dyadic shell radius <= r0/2 on which the sampled smallness
/// conditions (slope in (-1,-1/2), outward flux >= |y|^2/3) hold.
double largest_valid_shell(const CoeffTable& table, int samples_per_shell = 512);

/// Text serialization: header `# order=N D=<value>` then lines
/// `a1 a2 a3 coeff` in lexicographic index order.
void serialize(std::ostream& os, const CoeffTable& table);
CoeffTable deserialize(std::istream& is);

} // namespace shocksim::family
