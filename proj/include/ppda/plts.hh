// plts.hh -- explicit finite probabilistic labelled transition systems
#ifndef PPDA_PLTS_HH
#define PPDA_PLTS_HH

#include "ppda/distribution.hh"

#include <string>
#include <vector>

namespace ppda {

struct Move {
    int action = 0;
    Distribution<int> dist;
};

struct Plts {
    std::vector<std::string> names;
    std::vector<std::string> actions;
    std::vector<std::vector<Move>> out;

    int size() const { return static_cast<int>(out.size()); }
    int addState(const std::string& name);
    int actionIndex(const std::string& a); // adds when missing
    void addMove(int s, int action, std::vector<std::pair<int, Rational>> dist);
    bool fullyProbabilistic() const;
};

// Disjoint union; states of b are shifted by a.size().  Actions are merged by name.
Plts disjointUnion(const Plts& a, const Plts& b);

} // namespace ppda

#endif
