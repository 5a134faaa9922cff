// Dimensions of the invariant order-n tensors over R^3, exact and by quadrature.

#include <cstdio>

#include "haar.hpp"

int main() {
    using namespace haar;
    std::printf("%3s %12s %12s %16s\n", "n", "SO(3)", "O(3)", "reduced SO(3)");
    for (int n = 0; n <= 20; ++n) {
        const auto so3 = dim_invariants_closed(GroupTag::so3, n);
        const auto o3 = dim_invariants_closed(GroupTag::o3, n);
        const auto estimate = dim_invariants_reduced(GroupTag::so3, n);
        std::printf("%3d %12s %12s %16.6f%s\n", n, so3.str().c_str(), o3.str().c_str(), estimate.value,
                    estimate.resolved ? "" : "  (unresolved)");
    }
}
