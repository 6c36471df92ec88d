// Confronts the constructed spectra of the free ring and the free box with
// the classical closed forms: the ring orbit of energy E closes after
// tau = 2 pi / sqrt(E), and the k-th box chord takes tau = k pi / sqrt(E).

#include <cmath>
#include <iomanip>
#include <iostream>
#include <vector>

#include "feig/box.hpp"
#include "feig/potential.hpp"
#include "feig/ring.hpp"

using namespace feig;

int main() {
    const PotentialSpec ring = constant_potential(0.0, Domain::ring);
    const PotentialSpec box = constant_potential(0.0, Domain::box);

    std::cout << "free ring: period of the closed orbit vs 2 pi / sqrt(E)\n";
    std::cout << std::setw(8) << "E" << std::setw(18) << "tau* found" << std::setw(18)
              << "2 pi / sqrt(E)" << std::setw(13) << "gap" << std::setw(7) << "index"
              << "\n";
    for (double energy : {1.0, 4.0, 9.0}) {
        HamiltonianParams par;
        par.energy = energy;
        par.c = 0.5;
        const std::vector<RingSolution> sols = solve_ring(par, ring, {});
        for (const RingSolution& s : sols) {
            const double exact = kTwoPi / std::sqrt(energy);
            std::cout << std::setw(8) << std::setprecision(1) << std::fixed << energy
                      << std::setw(18) << std::setprecision(12) << s.tau_star
                      << std::setw(18) << exact << std::setw(13) << std::setprecision(2)
                      << std::scientific << std::abs(s.tau_star - exact) << std::setw(7)
                      << s.cz.index << "\n";
        }
    }

    std::cout << "\nfree box: chord times vs k pi / sqrt(E), index 2k - 1\n";
    std::cout << std::setw(8) << "E" << std::setw(4) << "k" << std::setw(18) << "tau* found"
              << std::setw(18) << "k pi / sqrt(E)" << std::setw(13) << "gap" << std::setw(7)
              << "index" << "\n";
    for (double energy : {1.0, 4.0, 9.0}) {
        HamiltonianParams par;
        par.energy = energy;
        par.c = 0.5;
        for (int k = 1; k <= 5; ++k) {
            const double tau = find_chord_tau(par, box, k);
            const double exact = k * kPi / std::sqrt(energy);
            const ChordIndexReport idx = chord_index(par, box, tau);
            std::cout << std::setw(8) << std::setprecision(1) << std::fixed << energy
                      << std::setw(4) << k << std::setw(18) << std::setprecision(12) << tau
                      << std::setw(18) << exact << std::setw(13) << std::setprecision(2)
                      << std::scientific << std::abs(tau - exact) << std::setw(7)
                      << idx.index << "\n";
        }
    }
    return 0;
}
