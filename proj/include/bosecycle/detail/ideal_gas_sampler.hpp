#pragma once

#include <cmath>
#include <random>

namespace bosecycle {

template <typename Rng>
PartitionSample sample_partition(const CycleDensityTable& table, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    PartitionSample out;
    long M = table.system.N;
    while (M > 0) {
        const double u = unif(rng);
        const double logQM = table.logQ[M].log_magnitude + std::log(static_cast<double>(M));
        double cumulative = 0.0;
        long n = 1;
        for (; n < M; ++n) {
            cumulative += table.q[n] * std::exp(table.logQ[M - n].log_magnitude - logQM);
            if (u < cumulative) {
                break;
            }
        }
        out.lengths.push_back(n);
        M -= n;
    }
    return out;
}

}  // namespace bosecycle
