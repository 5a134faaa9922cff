// Draws uniform rotations in each chart and compares the rotation-angle
// histogram with the density (1 - cos a) / pi.

#include <cmath>
#include <cstdio>
#include <vector>

#include "haar.hpp"

int main() {
    using namespace haar;
    constexpr int bins = 10;
    constexpr std::size_t n = 200000;
    for (auto chart : {SamplerChart::euler, SamplerChart::polar, SamplerChart::quaternion}) {
        std::vector<int> counts(bins, 0);
        for (const auto& g : sample({GroupTag::so3, chart, 7, n})) {
            const int b = static_cast<int>(rotation_angle(g) / kPi * bins);
            ++counts[std::min(b, bins - 1)];
        }
        std::printf("%s chart\n", std::string(to_string(chart)).c_str());
        for (int b = 0; b < bins; ++b) {
            const double lo = kPi * b / bins, hi = kPi * (b + 1) / bins;
            const double expected = ((hi - std::sin(hi)) - (lo - std::sin(lo))) / kPi;
            std::printf("  [%.3f, %.3f)  observed %.4f  expected %.4f\n", lo, hi,
                        static_cast<double>(counts[b]) / n, expected);
        }
    }
}
