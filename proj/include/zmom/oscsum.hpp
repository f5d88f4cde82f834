#ifndef ZMOM_OSCSUM_HPP
#define ZMOM_OSCSUM_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace zmom {

// Sums S(t_k) = sum_i amp_i * exp(-i * t_k * freq_i) over the arithmetic grid
// t_k = t0 + k*step, k = 0..count-1.
//
// Within a block of kAnchorPeriod consecutive nodes each term is advanced by
// one complex rotation per node; at block starts the phases are recomputed
// from scratch, which keeps the accumulated rounding drift below ~2e-13
// relative per term. Blocks are independent, so results are identical for any
// thread count, and terms are accumulated in index order inside a node.
class OscSumGrid {
public:
    static constexpr std::size_t kAnchorPeriod = 2048;

    OscSumGrid(std::vector<std::complex<double>> amplitudes, std::vector<double> frequencies,
               double t0, double step);

    std::size_t term_count() const { return amp_.size(); }

    // Evaluates nodes [k0, k0+n) into out[0..n). k0 must be a multiple of
    // kAnchorPeriod (or 0) for reproducibility across different chunkings.
    void eval_block(std::size_t k0, std::size_t n, std::complex<double>* out) const;

    // Convenience: all nodes, parallel over anchor blocks.
    std::vector<std::complex<double>> eval_all(std::size_t count, int threads) const;

private:
    std::vector<std::complex<double>> amp_;
    std::vector<double> freq_;
    double t0_, step_;
};

} // namespace zmom

#endif
