#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace leakage_lab {

// thrown when an exact enumeration would exceed its configured cap; the
// message always names the offending budget
class BudgetError : public std::runtime_error {
  public:
    BudgetError(const std::string& what, const std::string& budget_name)
        : std::runtime_error(what + " [budget: " + budget_name + "]"), budget_(budget_name) {}
    const std::string& budget_name() const { return budget_; }

  private:
    std::string budget_;
};

struct Budgets {
    uint64_t codewords = 10'000'000;    // q^k style enumerations
    uint64_t subsets = 100'000'000;     // brute-force subset scans
    uint64_t transcripts = 1'048'576;   // 2^{mu n} transcript sweeps

    static Budgets& global() {
        static Budgets b;
        return b;
    }
};

}  // namespace leakage_lab
