#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sprcal/analysis/constants.hpp"
#include "sprcal/analysis/inequalities.hpp"
#include "sprcal/calib/forecaster.hpp"
#include "sprcal/experiments.hpp"
#include "sprcal/spr/game.hpp"
#include "sprcal/spr/oracle.hpp"
#include "sprcal/spr/pointers.hpp"
#include "sprcal/spr/transcript_io.hpp"
#include "sprcal/verify.hpp"

namespace py = pybind11;
using namespace sprcal;

namespace {

py::dict calib_run(const std::string& forecaster, const std::string& adversary, int T, std::uint64_t seed, int h,
                   double gamma) {
    const int T2 = floor_pow2(T);
    auto f = make_forecaster(forecaster, h, gamma);
    auto a = make_adversary(adversary, T2);
    calib::CalibTranscript tr;
    {
        py::gil_scoped_release release;
        tr = calib::run_calibration(*f, *a, T2, seed);
    }
    py::dict out;
    out["T"] = T2;
    out["seed"] = seed;
    out["forecaster"] = tr.forecaster_id;
    out["adversary"] = tr.adversary_id;
    out["calerr"] = tr.ledger.calerr();
    out["distinct_p"] = tr.ledger.distinct();
    out["transcript"] = calib::to_jsonl(tr);
    if (auto* spf = dynamic_cast<calib::SignPreservationForecaster*>(f.get())) {
        out["diagnostics"] = spf->diagnostics_json();
        out["reduced_ok"] = spf->check_reduced_transcripts().ok();
    }
    return out;
}

py::dict certificate(double lambda, double delta) {
    auto c = analysis::find_beta_epsilon(lambda, delta);
    py::dict d;
    d["lambda"] = c.lambda;
    d["C"] = c.C;
    d["delta"] = c.delta;
    d["beta"] = c.beta;
    d["epsilon"] = c.epsilon;
    d["alpha"] = c.alpha;
    d["max_residual"] = c.max_residual;
    d["verified"] = c.verified;
    return d;
}

}  // namespace

PYBIND11_MODULE(_sprcal, m) {
    m.doc() = "Sign-preservation games and calibration experiments";

    py::register_exception<analysis::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<calib::IncompatiblePairing>(m, "IncompatiblePairing", PyExc_ValueError);

    m.def("opt_value", [](int n, int s, std::uint64_t max_states) { return spr::opt_value(n, s, {max_states}); },
          py::arg("n"), py::arg("s"), py::arg("max_states") = 2187);
    m.def("opt_value_bruteforce", &spr::opt_value_bruteforce, py::arg("n"), py::arg("s"));
    m.def("tree_sample", [](int d, int k, std::uint64_t seed) {
        spr::TreeParams p{d, k};
        p.validate();
        return spr::tree_sample(p, seed);
    }, py::arg("d"), py::arg("k"), py::arg("seed"));
    m.def("play_game", [](int n, int s, const std::string& pointer, const std::string& labeler, std::uint64_t seed) {
        auto ptr = make_pointer(pointer, n);
        auto lab = make_labeler(labeler, n);
        auto tr = spr::play_game(n, s, *ptr, *lab, seed);
        py::dict out;
        out["preserved"] = spr::preserved_counts(spr::replay(tr)).total();
        out["rounds"] = tr.rounds.size();
        out["transcript"] = spr::to_jsonl(tr);
        return out;
    }, py::arg("n"), py::arg("s"), py::arg("pointer") = "random", py::arg("labeler") = "ab", py::arg("seed") = 1);
    m.def("calib_run", &calib_run, py::arg("forecaster"), py::arg("adversary"), py::arg("T"), py::arg("seed") = 1,
          py::arg("h") = 0, py::arg("gamma") = -1.0);
    m.def("find_beta_epsilon", &certificate, py::arg("lambda_") = 1.5, py::arg("delta") = 0.01);
    m.def("entropy_exponent", [] {
        auto r = analysis::entropy_exponent();
        return py::make_tuple(r.lambda_star, r.g_star, r.unimodal);
    });
    m.def("constants_json", [] {
        return analysis::constants_json(analysis::find_beta_epsilon(), analysis::entropy_exponent());
    });
    m.def("fit_exponent", [](const std::vector<std::pair<double, double>>& pts) {
        auto f = analysis::fit_exponent(pts);
        return py::make_tuple(f.slope, f.stderr_slope);
    }, py::arg("points"));
    m.def("spr_scaling_csv", [](const std::vector<int>& grid, const std::vector<std::string>& pointers,
                                const std::vector<std::uint64_t>& seeds, const std::string& labeler) {
        SprScalingResult r;
        {
            py::gil_scoped_release release;
            r = spr_scaling(grid, pointers, seeds, labeler);
        }
        py::dict fits;
        for (const auto& f : r.fits) fits[py::str(f.pointer)] = py::make_tuple(f.fit.slope, f.fit.stderr_slope);
        return py::make_tuple(r.csv(), fits);
    }, py::arg("n_grid"), py::arg("pointers"), py::arg("seeds"), py::arg("labeler") = "ab");
    m.def("verify", [](const std::vector<int>& only) {
        std::vector<verify::CriterionResult> res;
        {
            py::gil_scoped_release release;
            res = verify::verify_all(only);
        }
        py::list out;
        for (const auto& r : res) out.append(py::make_tuple(r.id, r.name, r.pass, r.detail));
        return out;
    }, py::arg("only") = std::vector<int>{});
}
