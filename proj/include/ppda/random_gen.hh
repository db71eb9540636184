// random_gen.hh -- seeded generators for property tests and difftest
#ifndef PPDA_RANDOM_GEN_HH
#define PPDA_RANDOM_GEN_HH

#include "ppda/automaton.hh"
#include "ppda/gadgets.hh"
#include "ppda/semantics.hh"

#include <random>

namespace ppda {

using Rng = std::mt19937_64;

struct RandomPpdaParams {
    int maxStates = 3;
    int maxSymbols = 3;
    int maxActions = 2;
    int maxSupport = 3;
    int maxPush = 2;
    double ruleProbability = 0.6; // per (head, action)
    bool diracOnly = false;
};

// Random distribution over {0..n-1} with the given support size; weights are
// multiples of 1/den for a random small denominator.
Distribution<int> randomDistribution(Rng& rng, int n, int support);
Partition randomPartition(Rng& rng, int n, int blocks);

Ppda randomPpda(Rng& rng, const RandomPpdaParams& p);
// Fully probabilistic pOCA over {X, Z} with k control states.
Ppda randomPoca(Rng& rng, int k, int maxSupport = 2, double ruleProbability = 0.8);
// pvPDA with actions a_r, a_int, a_c (one per class).
Ppda randomPvpda(Rng& rng, int maxStates, int maxSymbols, int maxSupport, bool diracOnly, double ruleProbability = 0.5);
Configuration randomConfiguration(Rng& rng, const Ppda& spec, int minLen, int maxLen);

// Random game in the shape required by gameToPvpda.
PushdownGame randomGame(Rng& rng, int maxStates, int maxSymbols);
// Reachable graph from p0X0 is finite within cap and never empties the stack.
bool gameSuitable(const PushdownGame& g, std::size_t cap = 2000);

int uniformInt(Rng& rng, int lo, int hi); // inclusive

} // namespace ppda

#endif
