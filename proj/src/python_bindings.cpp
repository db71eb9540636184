#include "ppda/cli.hh"
#include "ppda/error.hh"
#include "ppda/gadgets.hh"
#include "ppda/oca.hh"
#include "ppda/reduction.hh"
#include "ppda/semantics.hh"
#include "ppda/text_format.hh"
#include "ppda/vpda.hh"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ppda;

namespace {

Ppda validated(const std::string& text)
{
    Ppda spec = loadPpda(text);
    auto rep = validate(spec);
    if (!rep.empty())
        throw Error(ErrorCode::Unvalidated, "line " + std::to_string(rep.front().line) + ": " + rep.front().message);
    return spec;
}

py::dict statsDict(const SizeStats& s)
{
    py::dict d;
    d["gamma"] = s.gamma;
    d["gamma_prime"] = s.gammaPrime;
    d["sigma"] = s.sigma;
    d["sigma_prime"] = s.sigmaPrime;
    d["rho"] = s.rho;
    d["m"] = s.m;
    d["w"] = s.w;
    d["rules_under_hash"] = s.rulesUnderHash;
    d["within_bounds"] = s.withinBounds();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Bisimilarity of probabilistic pushdown automata";
    m.attr("__version__") = "0.1.0";

    static py::exception<Error> pyError(m, "PpdaError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = pyError;
            py::object inst = err(e.what());
            inst.attr("code") = errorCodeName(e.code());
            PyErr_SetObject(pyError.ptr(), inst.ptr());
        }
    });

    py::class_<Ppda>(m, "Ppda")
        .def_static("from_text", &loadPpda, py::arg("text"))
        .def_static("from_file", &loadPpdaFile, py::arg("path"))
        .def("render", &renderPpda)
        .def_readonly("states", &Ppda::states)
        .def_readonly("stack", &Ppda::stack)
        .def_readonly("actions", &Ppda::actions)
        .def_property_readonly("rule_count", [](const Ppda& p) { return p.rules.size(); })
        .def("__repr__", [](const Ppda& p) {
            return "<Ppda " + std::to_string(p.states.size()) + " states, " + std::to_string(p.rules.size()) +
                   " rules>";
        });

    m.def(
        "validate",
        [](const std::string& text) {
            auto pr = parsePpda(text);
            ValidationReport issues = pr.issues.empty() ? validate(pr.spec) : pr.issues;
            py::list out;
            for (const auto& i : issues)
                out.append(py::make_tuple(i.line, i.rule, i.message));
            return out;
        },
        py::arg("text"), "issues as (line, rule, message); empty when valid");

    m.def(
        "classify", [](const Ppda& spec) { return classify(spec).names(); }, py::arg("spec"));

    m.def(
        "check",
        [](const std::string& text, const std::string& c1, const std::string& c2, int depth, std::size_t cap) {
            Ppda spec = validated(text);
            auto v = bisimDepth(spec, parseConfiguration(spec, c1), parseConfiguration(spec, c2), depth, cap);
            return v.str();
        },
        py::arg("text"), py::arg("c1"), py::arg("c2"), py::arg("depth") = 8, py::arg("cap") = kDefaultStateCap,
        "EQUIVALENT_AT(n) or DISTINGUISHED_AT(d)");

    m.def(
        "reduce",
        [](const std::string& text, bool visibly) {
            Ppda spec = validated(text);
            ReducedPda red = visibly ? buildReducedVisibly(spec) : buildReduced(spec);
            return py::make_tuple(red.spec, statsDict(sizeStats(spec, red)));
        },
        py::arg("text"), py::arg("visibly") = false);

    m.def(
        "vpda_decide",
        [](const std::string& text, const std::string& c1, const std::string& c2) {
            Ppda spec = validated(text);
            auto d = decideVpda(spec, parseConfiguration(spec, c1), parseConfiguration(spec, c2));
            return std::string(vpdaVerdictName(d.verdict));
        },
        py::arg("text"), py::arg("c1"), py::arg("c2"));

    m.def(
        "inc",
        [](const std::string& text) {
            Ppda spec = validated(text);
            std::vector<std::string> out;
            for (const auto& c : computeInc(spec))
                out.push_back(renderConfiguration(spec, c));
            return out;
        },
        py::arg("text"));

    m.def(
        "dist",
        [](const std::string& text, const std::string& state, int counter) -> std::optional<int> {
            Ppda spec = validated(text);
            requirePoca(spec);
            int s = spec.stateIndex(state);
            if (s < 0)
                throw Error(ErrorCode::UnknownState, "'" + state + "'");
            return exactDist(spec, s, counter);
        },
        py::arg("text"), py::arg("state"), py::arg("counter"), "None stands for an infinite distance");

    m.def(
        "afa_to_poca",
        [](const std::string& text) {
            auto p = afaToPoca(parseAfa(text));
            return py::make_tuple(p.spec, renderConfiguration(p.spec, ocaConfig(p.spec, p.p, 1)),
                                  renderConfiguration(p.spec, ocaConfig(p.spec, p.pp, 1)));
        },
        py::arg("text"));

    m.def(
        "game_to_pvpda",
        [](const std::string& text) {
            auto g = gameToPvpda(parseGame(text));
            return py::make_tuple(g.spec, renderConfiguration(g.spec, g.left), renderConfiguration(g.spec, g.right));
        },
        py::arg("text"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = runCli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "(exit status, stdout, stderr)");
}
