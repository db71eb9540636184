#include "ppda/text_format.hh"

#include "ppda/error.hh"

#include <fstream>
#include <sstream>

namespace ppda {

std::vector<std::string> splitWs(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string t;
    while (is >> t)
        out.push_back(t);
    return out;
}

std::string readFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

static std::string stripComment(const std::string& line)
{
    auto h = line.find('#');
    return h == std::string::npos ? line : line.substr(0, h);
}

static std::vector<std::string> splitOn(const std::string& s, char c)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == c) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

static Error parseError(int line, const std::string& m)
{
    return Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + m);
}

ParseResult parsePpda(const std::string& text)
{
    ParseResult res;
    Ppda& spec = res.spec;
    std::vector<std::pair<int, std::string>> ruleLines;
    std::optional<std::pair<int, std::string>> visLine;
    bool sawStates = false, sawStack = false, sawActions = false;

    std::istringstream is(text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(is, raw)) {
        ++lineNo;
        std::string line = stripComment(raw);
        auto toks = splitWs(line);
        if (toks.empty())
            continue;
        if (line.find("->") != std::string::npos) {
            ruleLines.emplace_back(lineNo, line);
            continue;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw parseError(lineNo, "expected a header 'key: ...' or a rule 'p X a -> ...'");
        std::string key = splitWs(line.substr(0, colon)).empty() ? "" : splitWs(line.substr(0, colon))[0];
        auto vals = splitWs(line.substr(colon + 1));
        if (key == "states") {
            sawStates = true;
            for (auto& v : vals)
                spec.states.push_back(v);
        } else if (key == "stack") {
            sawStack = true;
            for (auto& v : vals)
                spec.stack.push_back(v);
        } else if (key == "actions") {
            sawActions = true;
            for (auto& v : vals)
                spec.actions.push_back(v);
        } else if (key == "visibility") {
            visLine.emplace(lineNo, line.substr(colon + 1));
        } else {
            auto& dst = res.extraHeaders[key];
            dst.insert(dst.end(), vals.begin(), vals.end());
        }
    }
    if (!sawStates || !sawStack || !sawActions)
        throw parseError(lineNo, "missing one of the headers 'states:', 'stack:', 'actions:'");

    if (visLine) {
        std::vector<int> cls(spec.actions.size(), -1);
        for (const auto& tok : splitWs(visLine->second)) {
            auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw parseError(visLine->first, "visibility entries look like r=a,b int=c c=d");
            std::string k = tok.substr(0, eq);
            int c;
            if (k == "r")
                c = 0;
            else if (k == "int")
                c = 1;
            else if (k == "c")
                c = 2;
            else
                throw parseError(visLine->first, "unknown visibility class '" + k + "'");
            for (const auto& a : splitOn(tok.substr(eq + 1), ',')) {
                if (a.empty())
                    continue;
                int ai = spec.actionIndex(a);
                if (ai < 0)
                    throw parseError(visLine->first, "visibility names undeclared action '" + a + "'");
                if (cls[ai] >= 0)
                    throw parseError(visLine->first, "action '" + a + "' assigned to two visibility classes");
                cls[ai] = c;
            }
        }
        std::vector<ActionClass> vis;
        for (std::size_t i = 0; i < cls.size(); ++i) {
            if (cls[i] < 0)
                throw parseError(visLine->first, "action '" + spec.actions[i] + "' has no visibility class");
            vis.push_back(static_cast<ActionClass>(cls[i]));
        }
        spec.visibility = std::move(vis);
    }

    for (const auto& [ln, line] : ruleLines) {
        auto arrow = line.find("->");
        auto lhs = splitWs(line.substr(0, arrow));
        if (lhs.size() != 3)
            throw parseError(ln, "left-hand side must be 'state symbol action'");
        Rule r;
        r.line = ln;
        int ri = static_cast<int>(spec.rules.size());
        auto note = [&](const std::string& kind, const std::string& name) {
            res.issues.push_back({ri, ln, "undeclared " + kind + " '" + name + "'"});
        };
        r.state = spec.stateIndex(lhs[0]);
        if (r.state < 0)
            note("control state", lhs[0]);
        r.symbol = spec.symbolIndex(lhs[1]);
        if (r.symbol < 0)
            note("stack symbol", lhs[1]);
        r.action = spec.actionIndex(lhs[2]);
        if (r.action < 0)
            note("action", lhs[2]);
        std::vector<std::pair<Target, Rational>> alts;
        for (const auto& altText : splitOn(line.substr(arrow + 2), '|')) {
            auto t = splitWs(altText);
            if (t.size() < 2)
                throw parseError(ln, "alternative must be 'probability state [symbols | .]'");
            Rational p;
            try {
                p = Rational::parse(t[0]);
            } catch (const Error& e) {
                throw parseError(ln, e.what());
            }
            if (p.sign() <= 0)
                throw parseError(ln, "probabilities must be positive");
            Target tg;
            tg.state = spec.stateIndex(t[1]);
            if (tg.state < 0)
                note("control state", t[1]);
            if (!(t.size() == 3 && t[2] == ".")) {
                for (std::size_t k = 2; k < t.size(); ++k) {
                    if (t[k] == ".")
                        throw parseError(ln, "'.' must stand alone for the empty word");
                    int s = spec.symbolIndex(t[k]);
                    if (s < 0)
                        note("stack symbol", t[k]);
                    tg.push.push_back(s);
                }
            }
            alts.emplace_back(std::move(tg), std::move(p));
        }
        r.dist = Distribution<Target>(std::move(alts));
        spec.rules.push_back(std::move(r));
    }
    return res;
}

ParseResult parsePpdaFile(const std::string& path) { return parsePpda(readFile(path)); }

Ppda loadPpda(const std::string& text)
{
    auto res = parsePpda(text);
    if (!res.issues.empty())
        throw Error(ErrorCode::Unvalidated, "line " + std::to_string(res.issues.front().line) + ": " +
                                                res.issues.front().message);
    auto rep = validate(res.spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, "line " + std::to_string(rep.front().line) + ": " + rep.front().message);
    return std::move(res.spec);
}

Ppda loadPpdaFile(const std::string& path) { return loadPpda(readFile(path)); }

std::string renderPpda(const Ppda& spec)
{
    std::ostringstream os;
    auto list = [&](const char* key, const std::vector<std::string>& v) {
        os << key << ":";
        for (const auto& s : v)
            os << " " << s;
        os << "\n";
    };
    list("states", spec.states);
    list("stack", spec.stack);
    list("actions", spec.actions);
    if (spec.visibility) {
        const char* keys[] = {"r", "int", "c"};
        os << "visibility:";
        for (int c = 0; c < 3; ++c) {
            os << " " << keys[c] << "=";
            bool first = true;
            for (std::size_t a = 0; a < spec.actions.size(); ++a)
                if (static_cast<int>((*spec.visibility)[a]) == c) {
                    os << (first ? "" : ",") << spec.actions[a];
                    first = false;
                }
        }
        os << "\n";
    }
    for (const Rule& r : spec.rules) {
        os << spec.states.at(r.state) << " " << spec.stack.at(r.symbol) << " " << spec.actions.at(r.action) << " ->";
        bool first = true;
        for (const auto& [t, w] : r.dist.entries()) {
            os << (first ? " " : " | ") << w.str() << " " << spec.states.at(t.state);
            if (t.push.empty())
                os << " .";
            for (int s : t.push)
                os << " " << spec.stack.at(s);
            first = false;
        }
        os << "\n";
    }
    return os.str();
}

static int longestPrefix(const std::vector<std::string>& names, const std::string& s, std::size_t pos)
{
    int best = -1;
    std::size_t bestLen = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto& n = names[i];
        if (n.size() > bestLen && s.compare(pos, n.size(), n) == 0) {
            best = static_cast<int>(i);
            bestLen = n.size();
        }
    }
    return best;
}

Configuration parseConfiguration(const Ppda& spec, const std::string& s)
{
    Configuration c;
    auto toks = splitWs(s);
    if (toks.empty())
        throw Error(ErrorCode::Parse, "empty configuration");
    if (toks.size() > 1) {
        c.state = spec.stateIndex(toks[0]);
        if (c.state < 0)
            throw Error(ErrorCode::Parse, "unknown control state '" + toks[0] + "'");
        for (std::size_t i = 1; i < toks.size(); ++i) {
            if (toks[i] == ".")
                continue;
            int x = spec.symbolIndex(toks[i]);
            if (x < 0)
                throw Error(ErrorCode::Parse, "unknown stack symbol '" + toks[i] + "'");
            c.stack.push_back(x);
        }
        return c;
    }
    const std::string& w = toks[0];
    c.state = longestPrefix(spec.states, w, 0);
    if (c.state < 0)
        throw Error(ErrorCode::Parse, "configuration '" + w + "' does not start with a control state");
    std::size_t pos = spec.states[c.state].size();
    if (pos < w.size() && w.substr(pos) == ".")
        return c;
    while (pos < w.size()) {
        int x = longestPrefix(spec.stack, w, pos);
        if (x < 0)
            throw Error(ErrorCode::Parse, "cannot read stack symbol at '" + w.substr(pos) + "'");
        c.stack.push_back(x);
        pos += spec.stack[x].size();
    }
    return c;
}

} // namespace ppda
