#pragma once

#include <cstdint>

namespace cpd {

// Running tally of scalar multiplications, the cost measure used by the
// analytic count model. Convention: a (m x k)(k x p) matrix product charges
// m*k*p, a Kronecker product of p- and q-vectors charges p*q, additions are
// free. Instrumented kernels charge the counter; nothing charges implicitly.
class CostCounter {
public:
  void charge(std::uint64_t mults) noexcept { total_ += mults; }
  void charge_gemm(std::int64_t m, std::int64_t k, std::int64_t p) noexcept {
    total_ += static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(k) *
              static_cast<std::uint64_t>(p);
  }
  void charge_kron(std::int64_t p, std::int64_t q) noexcept {
    total_ += static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(q);
  }

  std::uint64_t total() const noexcept { return total_; }
  void reset() noexcept { total_ = 0; }

private:
  std::uint64_t total_ = 0;
};

} // namespace cpd
