#include "ppda/plts.hh"

#include <algorithm>
#include <set>

namespace ppda {

int Plts::addState(const std::string& name)
{
    names.push_back(name);
    out.emplace_back();
    return size() - 1;
}

int Plts::actionIndex(const std::string& a)
{
    auto it = std::find(actions.begin(), actions.end(), a);
    if (it != actions.end())
        return static_cast<int>(it - actions.begin());
    actions.push_back(a);
    return static_cast<int>(actions.size()) - 1;
}

void Plts::addMove(int s, int action, std::vector<std::pair<int, Rational>> dist)
{
    out.at(s).push_back(Move{action, Distribution<int>(std::move(dist))});
}

bool Plts::fullyProbabilistic() const
{
    for (const auto& moves : out) {
        std::set<int> seen;
        for (const auto& m : moves)
            if (!seen.insert(m.action).second)
                return false;
    }
    return true;
}

Plts disjointUnion(const Plts& a, const Plts& b)
{
    Plts u = a;
    std::vector<int> amap;
    for (const auto& act : b.actions)
        amap.push_back(u.actionIndex(act));
    int shift = a.size();
    for (int s = 0; s < b.size(); ++s) {
        u.addState(s < static_cast<int>(b.names.size()) ? b.names[s] : std::to_string(s));
        for (const auto& m : b.out[s]) {
            std::vector<std::pair<int, Rational>> d;
            for (const auto& [t, w] : m.dist.entries())
                d.emplace_back(t + shift, w);
            u.addMove(shift + s, amap[m.action], std::move(d));
        }
    }
    return u;
}

} // namespace ppda
