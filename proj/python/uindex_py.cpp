// Python bindings for the core index operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "uindex/uindex.hpp"

namespace py = pybind11;
using namespace uindex;

namespace {

std::vector<Symbol> to_symbols(const py::object& obj, unsigned sigma) {
    if (py::isinstance<py::str>(obj)) {
        const auto s = obj.cast<std::string>();
        std::vector<Symbol> out(s.begin(), s.end());
        if (sigma == 4)
            for (auto& c : out) c = dna_code(static_cast<char>(c));
        return out;
    }
    if (py::isinstance<py::bytes>(obj) || py::isinstance<py::bytearray>(obj)) {
        const auto s = obj.cast<std::string>();
        return {s.begin(), s.end()};
    }
    return obj.cast<std::vector<Symbol>>();
}

IdMode parse_id_mode(const std::string& name) {
    if (name == "explicit") return IdMode::explicit_map;
    if (name == "identity") return IdMode::identity;
    if (name == "hashed") return IdMode::hashed;
    throw UsageError("unknown id mode '" + name + "'");
}

py::dict stats_dict(const LocateStats& s) {
    py::dict d;
    d["candidates"] = s.candidates;
    d["alignment_rejected"] = s.alignment_rejected;
    d["verified_true"] = s.verified_true;
    d["verified_false"] = s.verified_false;
    d["skipped"] = s.skipped;
    d["inner_probes"] = s.inner_probes;
    d["not_in_text"] = s.not_in_text;
    d["capped"] = s.capped;
    return d;
}

Caps make_caps(std::optional<uint64_t> max_matches, std::optional<uint64_t> max_candidates) {
    Caps c;
    if (max_matches) c.max_matches = *max_matches;
    if (max_candidates) c.max_candidates = *max_candidates;
    return c;
}

} // namespace

PYBIND11_MODULE(_uindex, m) {
    m.doc() = "Minimizer-sketch text index";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    // Later registrations are tried first, so the derived FormatError comes last.
    const auto data_error = py::register_exception<DataError>(m, "DataError", PyExc_OSError);
    py::register_exception<FormatError>(m, "FormatError", data_error.ptr());

    py::class_<Text, std::shared_ptr<Text>>(m, "Text")
        .def(py::init([](const py::object& data, unsigned sigma) {
                 return std::make_shared<Text>(to_symbols(data, sigma), sigma);
             }),
             py::arg("data"), py::arg("sigma") = 256)
        .def_static(
            "dna", [](const std::string& s) { return std::make_shared<Text>(to_symbols(py::str(s), 4), 4); },
            py::arg("bases"))
        .def_static(
            "load",
            [](const std::filesystem::path& p, const std::string& format) {
                return std::make_shared<Text>(load_text(p, parse_text_format(format)));
            },
            py::arg("path"), py::arg("format") = "plain")
        .def_property_readonly("sigma", &Text::sigma)
        .def("__len__", &Text::size)
        .def("symbols", [](const Text& t) { return std::vector<Symbol>(t.symbols().begin(), t.symbols().end()); });

    m.def(
        "random_text",
        [](size_t n, unsigned sigma, uint64_t seed) { return std::make_shared<Text>(random_text(n, sigma, seed)); },
        py::arg("n"), py::arg("sigma"), py::arg("seed") = 0);

    m.def(
        "compute_minimizers",
        [](const Text& t, unsigned k, unsigned ell, uint64_t seed, bool lexicographic) {
            SketchParams p;
            p.k = k;
            p.ell = ell;
            p.seed = seed;
            p.order = lexicographic ? MinimizerOrder::lexicographic : MinimizerOrder::random;
            p.validate();
            return compute_minimizers(t, p);
        },
        py::arg("text"), py::arg("k"), py::arg("ell"), py::arg("seed") = 0, py::arg("lexicographic") = false);

    py::class_<UIndex>(m, "Index")
        .def_static(
            "build",
            [](std::shared_ptr<Text> text, unsigned k, unsigned ell, unsigned tau, const std::string& backend,
               const std::string& verifier, const std::string& id_mode, bool implicit_s, uint64_t seed,
               bool lexicographic) {
                SketchParams p;
                p.k = k;
                p.ell = ell;
                p.tau = tau;
                p.seed = seed;
                p.id_mode = parse_id_mode(id_mode);
                p.implicit_s = implicit_s;
                p.order = lexicographic ? MinimizerOrder::lexicographic : MinimizerOrder::random;
                py::gil_scoped_release release;
                return UIndex::build(std::shared_ptr<const Text>(std::move(text)), p,
                                     IndexOptions{parse_backend(backend), parse_verifier(verifier)});
            },
            py::arg("text"), py::arg("k") = 8, py::arg("ell") = 64, py::arg("tau") = 0,
            py::arg("backend") = "sketch-sa", py::arg("verifier") = "scan", py::arg("id_mode") = "explicit",
            py::arg("implicit_s") = false, py::arg("seed") = 0, py::arg("lexicographic") = false)
        .def(
            "locate",
            [](const UIndex& idx, const py::object& pattern, std::optional<uint64_t> max_matches,
               std::optional<uint64_t> max_candidates) {
                return idx.locate(to_symbols(pattern, idx.text().sigma()), make_caps(max_matches, max_candidates))
                    .positions;
            },
            py::arg("pattern"), py::arg("max_matches") = py::none(), py::arg("max_candidates") = py::none())
        .def(
            "locate_with_stats",
            [](const UIndex& idx, const py::object& pattern, std::optional<uint64_t> max_matches,
               std::optional<uint64_t> max_candidates) {
                const LocateResult r =
                    idx.locate(to_symbols(pattern, idx.text().sigma()), make_caps(max_matches, max_candidates));
                return py::make_tuple(r.positions, stats_dict(r.stats));
            },
            py::arg("pattern"), py::arg("max_matches") = py::none(), py::arg("max_candidates") = py::none())
        .def(
            "count",
            [](const UIndex& idx, const py::object& pattern) {
                return idx.count(to_symbols(pattern, idx.text().sigma())).first;
            },
            py::arg("pattern"))
        .def("extract", &UIndex::extract, py::arg("begin"), py::arg("end"))
        .def(
            "save", [](const UIndex& idx, const std::filesystem::path& p) { idx.save(p); }, py::arg("path"))
        .def_static(
            "load", [](const std::filesystem::path& p) { return UIndex::load(p); }, py::arg("path"))
        .def("serialize",
             [](const UIndex& idx) {
                 const auto bytes = idx.serialize();
                 return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
             })
        .def_static("deserialize",
                    [](const py::bytes& data) {
                        const std::string_view v = data;
                        return UIndex::deserialize(
                            std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(v.data()), v.size()));
                    })
        .def_property_readonly("k", [](const UIndex& idx) { return idx.params().k; })
        .def_property_readonly("ell", [](const UIndex& idx) { return idx.params().ell; })
        .def_property_readonly("z", [](const UIndex& idx) { return idx.report().z; })
        .def_property_readonly("b", [](const UIndex& idx) { return idx.layout().b; })
        .def_property_readonly("tau", [](const UIndex& idx) { return idx.layout().tau; })
        .def_property_readonly("text", [](const UIndex& idx) { return std::const_pointer_cast<Text>(idx.shared_text()); })
        .def("sizes", [](const UIndex& idx) {
            const SizeBreakdown s = idx.sizes();
            py::dict d;
            d["header"] = s.header;
            d["positions"] = s.positions;
            d["id_map"] = s.id_map;
            d["sketch"] = s.sketch;
            d["inner"] = s.inner;
            d["verification"] = s.verification;
            d["text"] = s.text;
            d["payload"] = s.payload();
            d["total"] = s.total();
            return d;
        });
}
