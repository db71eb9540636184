// automaton.hh -- probabilistic pushdown automata, configurations, validation
#ifndef PPDA_AUTOMATON_HH
#define PPDA_AUTOMATON_HH

#include "ppda/distribution.hh"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ppda {

using Word = std::vector<int>; // stack word, index 0 is the top

struct Target {
    int state = 0;
    Word push;
    friend bool operator==(const Target& a, const Target& b) { return a.state == b.state && a.push == b.push; }
    friend bool operator<(const Target& a, const Target& b)
    {
        return a.state != b.state ? a.state < b.state : a.push < b.push;
    }
};

enum class ActionClass { Return, Internal, Call };

const char* actionClassName(ActionClass c);
// push length forced by a visibility class
int pushLengthOf(ActionClass c);

struct Rule {
    int state = 0;
    int symbol = 0;
    int action = 0;
    Distribution<Target> dist;
    int line = 0; // source line, 0 when built programmatically
};

struct Ppda {
    std::vector<std::string> states;
    std::vector<std::string> stack;
    std::vector<std::string> actions;
    std::vector<Rule> rules;
    std::optional<std::vector<ActionClass>> visibility; // one class per action

    int stateIndex(const std::string& n) const;
    int symbolIndex(const std::string& n) const;
    int actionIndex(const std::string& n) const;

    int addState(const std::string& n);  // returns existing index when present
    int addSymbol(const std::string& n);
    int addAction(const std::string& n, std::optional<ActionClass> cls = std::nullopt);
    void addRule(int q, int x, int a, std::vector<std::pair<Target, Rational>> alts);
};

struct Configuration {
    int state = 0;
    Word stack;

    bool empty() const { return stack.empty(); }
    friend bool operator==(const Configuration& a, const Configuration& b)
    {
        return a.state == b.state && a.stack == b.stack;
    }
    friend bool operator<(const Configuration& a, const Configuration& b)
    {
        return a.state != b.state ? a.state < b.state : a.stack < b.stack;
    }
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const;
};

// Rule lookup by head (q, X).
class HeadIndex {
public:
    explicit HeadIndex(const Ppda& spec);
    const std::vector<int>& rules(int q, int x) const { return byHead_[static_cast<std::size_t>(q) * width_ + x]; }
    bool dead(int q, int x) const { return rules(q, x).empty(); }

private:
    std::size_t width_;
    std::vector<std::vector<int>> byHead_;
};

struct Issue {
    int rule = -1; // -1 for header-level problems
    int line = 0;
    std::string message;
};

using ValidationReport = std::vector<Issue>;

ValidationReport validate(const Ppda& spec);

struct SubclassSet {
    bool pBPA = false;
    bool pOCA = false;
    bool pvPDA = false;
    bool fullyProbabilistic = false;
    bool diracOnly = false;
    std::vector<std::string> names() const;
};

// Throws Error(Unvalidated) when validate reports anything.
SubclassSet classify(const Ppda& spec);
bool isDiracOnly(const Ppda& spec);
bool isFullyProbabilistic(const Ppda& spec);

// pOCA bottom marker discipline; reason is filled on failure
bool pocaShape(const Ppda& spec, std::string* reason = nullptr);
// rule push lengths agree with the visibility classes of their actions
bool visiblyShape(const Ppda& spec, std::string* reason = nullptr);

std::string renderConfiguration(const Ppda& spec, const Configuration& c);
std::string renderTarget(const Ppda& spec, const Target& t);

} // namespace ppda

#endif
