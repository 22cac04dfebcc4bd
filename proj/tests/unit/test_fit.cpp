#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "eit/error.hpp"
#include "eit/fit.hpp"
#include "eit/run_spec.hpp"

using namespace eit;

namespace {

LambdaParams truth() { return preset_spec("fig9").params; }

Trace synthetic(const LambdaParams& p, const Nuisance& n, FitQuantity q = FitQuantity::Transmission,
                double noise = 0.0, unsigned seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, noise);
  std::vector<double> t, v;
  for (int i = 0; i <= 450; ++i) {
    t.push_back(-0.05 + 0.001 * i);
    v.push_back(model_turnoff(p, n, t.back(), q) + (noise > 0.0 ? g(rng) : 0.0));
  }
  return Trace(t, v);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Usage;
}

}  // namespace

TEST_CASE("trace validation") {
  CHECK(code_of([] { Trace({0, 1, 2}, {0, 1, 2}); }) == ErrorCode::InvalidTrace);
  CHECK(code_of([] { Trace({0, 1, 2, 3, 4, 5, 6, 7}, {0, 1}); }) == ErrorCode::InvalidTrace);
  CHECK(code_of([] { Trace({0, 1, 2, 3, 3, 5, 6, 7}, {0, 1, 2, 3, 4, 5, 6, 7}); }) ==
        ErrorCode::InvalidTrace);
  CHECK(parse_fit_param("delta2") == FitParam::delta2);
  CHECK(to_string(FitParam::gamma_ba) == "gamma_ba");
  CHECK(code_of([] { parse_fit_param("bogus"); }) == ErrorCode::ParseError);
}

TEST_CASE("noiseless probe detuning recovery") {
  const LambdaParams p = truth();
  const Trace tr = synthetic(p, {});
  LambdaParams guess = p;
  guess.delta2 += 3.0;
  const FitResult r = fit_turnoff(tr, guess, {}, {FitParam::delta2});
  CHECK(r.converged);
  CHECK(std::abs(r.params.delta2 - p.delta2) < 1e-6);
}

TEST_CASE("detuning, width and detector nuisance recovered together") {
  // Delta1, omega1 and gamma_ba only reach the transient through the initial
  // coherence, so they trade off against scale and stay fixed here.
  const LambdaParams p = truth();
  const Nuisance n{1.1, 0.002, 0.03};
  const Trace tr = synthetic(p, n);
  LambdaParams guess = p;
  guess.delta2 *= 0.9;
  guess.gamma_ca = guess.gamma_cb = p.gamma() * 1.2;
  const FitResult r = fit_turnoff(tr, guess, {0.9, 0.0, 0.0},
                                  {FitParam::delta2, FitParam::gamma, FitParam::scale,
                                   FitParam::t0, FitParam::baseline});
  CHECK(r.converged);
  CHECK(r.params.delta2 == doctest::Approx(p.delta2).epsilon(1e-6));
  CHECK(r.params.gamma() == doctest::Approx(p.gamma()).epsilon(1e-6));
  CHECK(r.params.gamma_ca == r.params.gamma_cb);
  CHECK(r.nuisance.scale == doctest::Approx(1.1).epsilon(1e-6));
  CHECK(r.nuisance.t0 == doctest::Approx(0.002).epsilon(1e-6));
  CHECK(r.nuisance.baseline == doctest::Approx(0.03).epsilon(1e-6));
}

TEST_CASE("collinear parameters are reported") {
  const LambdaParams p = truth();
  // Before the switch the model is a constant, so gain and offset coincide.
  std::vector<double> t, v;
  for (int i = 0; i < 20; ++i) {
    t.push_back(-0.05 + 0.001 * i);
    v.push_back(model_turnoff(p, {}, t.back()));
  }
  const Trace flat(t, v);
  CHECK(code_of([&] { fit_turnoff(flat, p, {}, {FitParam::scale, FitParam::baseline}); }) ==
        ErrorCode::SingularJacobian);
  try {
    fit_turnoff(flat, p, {}, {FitParam::scale, FitParam::baseline});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("baseline") != std::string::npos);
  }
  const Trace tr = synthetic(p, {});
  CHECK(code_of([&] { fit_turnoff(tr, p, {}, {}); }) == ErrorCode::Usage);
  CHECK(code_of([&] { fit_turnoff(tr, p, {}, {FitParam::u, FitParam::u}); }) == ErrorCode::Usage);
}

TEST_CASE("fit is invariant under detector gain") {
  const LambdaParams p = truth();
  const Trace a = synthetic(p, {}, FitQuantity::Transmission, 0.01, 5);
  Trace b = a;
  for (double& v : b.values) v *= 2.5;
  LambdaParams guess = p;
  guess.delta2 += 1.0;
  const auto free = std::vector{FitParam::delta2, FitParam::scale, FitParam::baseline};
  const FitResult ra = fit_turnoff(a, guess, {}, free);
  const FitResult rb = fit_turnoff(b, guess, {}, free);
  CHECK(ra.params.delta2 == doctest::Approx(rb.params.delta2).epsilon(1e-6));
  CHECK(rb.nuisance.scale == doctest::Approx(2.5 * ra.nuisance.scale).epsilon(1e-6));
}

TEST_CASE("transmission and coherence traces give the same detuning") {
  const LambdaParams p = truth();
  LambdaParams guess = p;
  guess.delta2 -= 2.0;
  const auto free = std::vector{FitParam::delta2, FitParam::scale, FitParam::baseline};
  const FitResult rt = fit_turnoff(synthetic(p, {}, FitQuantity::Transmission), guess, {}, free);
  const FitResult ri = fit_turnoff(synthetic(p, {}, FitQuantity::ImRhoBC), guess, {}, free,
                                   {FitQuantity::ImRhoBC});
  CHECK(rt.params.delta2 == doctest::Approx(ri.params.delta2).epsilon(1e-8));
  CHECK(ri.params.delta2 == doctest::Approx(p.delta2).epsilon(1e-6));
}

TEST_CASE("ringing envelope and period") {
  const LambdaParams p = truth();
  const Trace tr = synthetic(p, {});
  CHECK(envelope_decay(tr) == doctest::Approx(p.gamma()).epsilon(0.2 / 5.5));
  CHECK(ringing_period(tr) == doctest::Approx(1.0 / std::abs(p.delta2)).epsilon(0.02));

  std::vector<double> t, v;
  for (int i = 0; i < 100; ++i) {
    t.push_back(0.01 * i);
    v.push_back(std::exp(-t.back()));
  }
  CHECK(code_of([&] { envelope_decay(Trace(t, v)); }) == ErrorCode::TooFewExtrema);
  CHECK(code_of([&] { ringing_period(Trace(t, v)); }) == ErrorCode::TooFewExtrema);
}

TEST_CASE("fit report") {
  const LambdaParams p = truth();
  const FitResult r = fit_turnoff(synthetic(p, {}, FitQuantity::Transmission, 0.01, 2), p, {},
                                  default_free_set());
  std::ostringstream out;
  write_report(out, r);
  const std::string text = out.str();
  CHECK(text.find("delta2 = ") != std::string::npos);
  CHECK(text.find("+/-") != std::string::npos);
  CHECK(text.find("rss = ") != std::string::npos);
  CHECK(text.find("converged = true") != std::string::npos);
  CHECK(r.stderrs.at(FitParam::delta2) > 0.0);
}
