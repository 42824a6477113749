#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rfic/disorder.hpp"
#include "rfic/experiments.hpp"
#include "rfic/extrema.hpp"
#include "rfic/oracle.hpp"
#include "rfic/reflected.hpp"
#include "rfic/rg.hpp"
#include "rfic/transfer.hpp"

namespace py = pybind11;
using namespace rfic;

namespace {

std::string table_csv(const Table& t) {
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

ExperimentConfig make_config(const std::string& law, std::vector<double> sweep, std::size_t replicas,
                             std::int64_t n, std::uint64_t seed, unsigned threads) {
    ExperimentConfig cfg;
    cfg.law = DisorderLaw::parse(law);
    cfg.sweep = std::move(sweep);
    cfg.replicas = replicas;
    cfg.n = n;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_rfic, m) {
    m.doc() = "Random-field Ising chain: transfer recursions, Gamma-extrema, decimation and experiments";

    m.def("sample_field", [](const std::string& law, std::int64_t first, std::int64_t last, std::uint64_t seed) {
        return sample_field(DisorderLaw::parse(law), first, last, seed).h;
    }, py::arg("law"), py::arg("first"), py::arg("last"), py::arg("seed"));

    m.def("log_partition", py::overload_cast<const std::vector<double>&, double, int, int>(&log_partition),
          py::arg("h"), py::arg("J"), py::arg("a") = 1, py::arg("b") = 1);

    m.def("marginals", [](const std::vector<double>& h, double J, int a, int b) {
        return marginals(FieldWindow(1, h), ModelParams::from_J(J), a, b);
    }, py::arg("h"), py::arg("J"), py::arg("a") = 1, py::arg("b") = 1);

    m.def("enumerate_log_partition", [](const std::vector<double>& h, double J, int a, int b) {
        return enumerate<double>(h, J, a, b).logZ;
    }, py::arg("h"), py::arg("J"), py::arg("a") = 1, py::arg("b") = 1);

    m.def("gamma_extrema", [](const std::vector<double>& h, double gamma) {
        const auto seq = gamma_extrema_one_sided(walk_from_field(FieldWindow(1, h)), gamma);
        py::list out;
        for (const auto& r : seq.records)
            out.append(py::dict(py::arg("kind") = kind_name(r.kind), py::arg("u") = r.u, py::arg("u_plus") = r.u_plus,
                                py::arg("level") = r.level, py::arg("t") = r.t));
        return out;
    }, py::arg("h"), py::arg("gamma"), "Gamma-extrema of the walk of h (sites 1..N) scanned from 0.");

    m.def("rg_breakpoints", [](const std::vector<double>& h, double gamma) {
        return rg_run(FieldWindow(1, h), gamma).chain.breakpoints();
    }, py::arg("h"), py::arg("gamma"));

    m.def("rg_report", [](const std::string& law, double gamma, std::int64_t n, std::uint64_t seed) {
        const auto d = DisorderLaw::parse(law);
        return rg_vs_extrema(law_source(d, seed), n, gamma, d.atomic()).to_json();
    }, py::arg("law"), py::arg("gamma"), py::arg("n"), py::arg("seed"), "Decimation report as a JSON string.");

    m.def("hat_l", [](const std::vector<double>& h, double gamma) {
        return hat_l_from_coalescence(FieldWindow(1, h), gamma).value;
    }, py::arg("h"), py::arg("gamma"));

    m.def("discrepancy_csv", [](const std::string& law, std::vector<double> gammas, std::size_t replicas,
                                std::uint64_t seed, unsigned threads) {
        return table_csv(estimate_D_Gamma(make_config(law, std::move(gammas), replicas, 10000, seed, threads)));
    }, py::arg("law"), py::arg("gammas"), py::arg("replicas"), py::arg("seed") = 1, py::arg("threads") = 1);

    m.def("free_energy_csv", [](const std::string& law, std::vector<double> js, std::int64_t n, std::size_t replicas,
                                std::uint64_t seed, unsigned threads) {
        return table_csv(free_energy(make_config(law, std::move(js), replicas, n, seed, threads)));
    }, py::arg("law"), py::arg("J"), py::arg("n"), py::arg("replicas"), py::arg("seed") = 1, py::arg("threads") = 1);

    m.def("free_energy_zero_field", &free_energy_zero_field, py::arg("J"), py::arg("n"));
}
