// reduction.hh -- encoding probabilistic branching as nondeterministic choice
//
// Every rule qX -a-> d becomes three steps of a Dirac-only PDA:
//   qX -a-> q<d>,   q<d> -w-> q<T> when d(T) >= w,   q<T> -#-> p alpha for p alpha in T.
// Subsets T range over nonempty subsets of support(d), weights over W \ {0}.
#ifndef PPDA_REDUCTION_HH
#define PPDA_REDUCTION_HH

#include "ppda/automaton.hh"
#include "ppda/semantics.hh"

#include <string>
#include <vector>

namespace ppda {

constexpr int kDefaultSupportCap = 16;

struct WeightSet {
    std::vector<Rational> weights; // ascending, no duplicates
    bool contains(const Rational& w) const;
};

WeightSet computeWeights(const Ppda& spec, int supportCap = kDefaultSupportCap);

struct SymbolOrigin {
    int rule = -1;
    unsigned long mask = 0; // 0 marks the <d> symbol of the rule
};

struct ReducedPda {
    Ppda spec;
    WeightSet weights;
    int baseSymbols = 0;  // symbols [0, baseSymbols) are the original stack alphabet
    int baseActions = 0;  // actions [0, baseActions) are the original actions
    bool visibly = false;
    std::vector<int> distSymbol;                 // per source rule
    std::vector<std::vector<int>> subsetSymbol;  // per source rule, per mask (index 0 unused)
    std::vector<SymbolOrigin> origin;            // per new symbol, offset by baseSymbols
    std::vector<int> weightAction;               // per weight index
    int hashAction = -1;                         // plain reduction
    int hashR = -1, hashInt = -1, hashC = -1;    // visibly reduction

    bool isNewSymbol(int x) const { return x >= baseSymbols; }
    bool isHash(int a) const { return a == hashAction || a == hashR || a == hashInt || a == hashC; }
};

ReducedPda buildReduced(const Ppda& spec, int supportCap = kDefaultSupportCap);
ReducedPda buildReducedVisibly(const Ppda& spec, int supportCap = kDefaultSupportCap);

// bisimDepth(spec, n) and bisimDepth(reduced, 3n) agree on equivalence.
bool crossValidate(const Ppda& spec, const Configuration& c1, const Configuration& c2, int n,
                   std::size_t cap = kDefaultStateCap);
bool crossValidate(const Ppda& spec, const ReducedPda& red, const Configuration& c1, const Configuration& c2, int n,
                   std::size_t cap = kDefaultStateCap);

struct SizeStats {
    std::size_t gamma = 0, gammaPrime = 0;
    std::size_t sigma = 0, sigmaPrime = 0;
    std::size_t rho = 0;     // rules of the source
    std::size_t m = 0;       // largest support
    std::size_t w = 0;       // |W|
    std::size_t rulesUnderSigma = 0;
    std::size_t rulesUnderWeightMax = 0; // largest count under one weight action
    std::size_t rulesUnderWeight = 0;
    std::size_t rulesUnderHash = 0;
    std::size_t hashActions = 1;

    // the analytic bounds; violations are listed in 'why'
    bool withinBounds(std::vector<std::string>* why = nullptr) const;
};

SizeStats sizeStats(const Ppda& source, const ReducedPda& red);

} // namespace ppda

#endif
