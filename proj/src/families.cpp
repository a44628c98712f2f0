#include "xcflab/families.hpp"

#include "xcflab/error.hpp"
#include "xcflab/frame.hpp"

namespace xcf {

namespace {

Vec3 vec3_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3)
    throw Error(ErrorCode::ConfigError, std::string("family.") + key + " must be an array of 3 reals");
  return {j.at(key)[0].get<double>(), j.at(key)[1].get<double>(), j.at(key)[2].get<double>()};
}

double real_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorCode::ConfigError, std::string("family.") + key + " must be a number");
  return j.at(key).get<double>();
}

void require_negative(double K0) {
  if (!(K0 < 0.0)) throw Error(ErrorCode::ConfigError, "family.K0 must be negative");
}

}  // namespace

HyperbolicHalfspace::HyperbolicHalfspace(double K0) : K0_(K0) { require_negative(K0); }

PerturbedHyperbolic::PerturbedHyperbolic(double K0, double eps, const Vec3& center, double width,
                                         HyperbolicChart chart, BumpProfile profile)
    : K0_(K0), eps_(eps), center_(center), width_(width), chart_(chart), profile_(profile) {
  require_negative(K0);
  if (!(width > 0.0)) throw Error(ErrorCode::ConfigError, "family.bump_width must be positive");
}

SymMat3 PerturbedHyperbolic::shape() {
  SymMat3 P;
  P.c = {0.6, 0.4, 0.1, -0.3, 0.5, -0.3};
  return P;
}

nlohmann::json PerturbedHyperbolic::to_json() const {
  return {{"name", name()},
          {"K0", K0_},
          {"eps", eps_},
          {"bump_center", {center_[0], center_[1], center_[2]}},
          {"bump_width", width_},
          {"chart", chart_ == HyperbolicChart::Halfspace ? "halfspace" : "horospherical"},
          {"profile", profile_ == BumpProfile::Gaussian ? "gaussian" : "compact"}};
}

PulledBackHyperbolic::PulledBackHyperbolic(double K0, double eta, const Vec3& center, double width)
    : K0_(K0), eta_(eta), center_(center), width_(width) {
  require_negative(K0);
  if (!(width > 0.0)) throw Error(ErrorCode::ConfigError, "family.bump_width must be positive");
}

nlohmann::json PulledBackHyperbolic::to_json() const {
  return {{"name", name()},
          {"K0", K0_},
          {"eta", eta_},
          {"bump_center", {center_[0], center_[1], center_[2]}},
          {"bump_width", width_}};
}

PeriodicSynthetic::PeriodicSynthetic(double eps, const Vec3& lengths, const Vec3& origin)
    : eps_(eps), lengths_(lengths), origin_(origin) {}

nlohmann::json PeriodicSynthetic::to_json() const {
  return {{"name", name()},
          {"eps", eps_},
          {"lengths", {lengths_[0], lengths_[1], lengths_[2]}},
          {"origin", {origin_[0], origin_[1], origin_[2]}}};
}

PlaneWaveFamily::PlaneWaveFamily(FamilyPtr background, const SymMat3& V, const Vec3& k,
                                 double delta, double amplitude, const Vec3& x0)
    : background_(std::move(background)), V_(V), k_(k), delta_(delta), amplitude_(amplitude),
      x0_(x0) {}

SymMat3 PlaneWaveFamily::metric(const Vec3& x, double t) const {
  double phase = 0.0;
  for (int a = 0; a < 3; ++a) phase += k_[a] * (x[a] - x0_[a]);
  return background_->metric(x, t) + (amplitude_ * std::cos(phase / delta_)) * V_;
}

SymMat3 PlaneWaveFamily::metric_rate(const Vec3& x, double t) const {
  return background_->metric_rate(x, t);
}

MetricJet3 PlaneWaveFamily::jet3(const Vec3& x, double t) const {
  Vec3T<Dual3> xd{Seed<Dual3>::var(x[0], 0), Seed<Dual3>::var(x[1], 1),
                  Seed<Dual3>::var(x[2], 2)};
  Dual3 phase(0.0);
  for (int a = 0; a < 3; ++a) phase += (xd[a] - x0_[a]) * (k_[a] / delta_);
  Dual3 wave = cos(phase) * amplitude_;
  Sym3<Dual3> w;
  for (int s = 0; s < 6; ++s) w[s] = wave * V_[s];
  return background_->jet3(x, t) + jet3_from_dual(w);
}

nlohmann::json PlaneWaveFamily::to_json() const {
  return {{"name", name()},
          {"background", background_->to_json()},
          {"V", V_.c},
          {"k", k_},
          {"delta", delta_},
          {"amplitude", amplitude_},
          {"x0", x0_}};
}

FamilyPtr family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("name"))
    throw Error(ErrorCode::ConfigError, "family must be an object with a \"name\"");
  const std::string name = j.at("name").get<std::string>();
  if (name == "flat") return std::make_shared<FlatFamily>();
  if (name == "hyperbolic_halfspace")
    return std::make_shared<HyperbolicHalfspace>(real_from_json(j, "K0"));
  if (name == "perturbed_hyperbolic") {
    const std::string chart = j.value("chart", "halfspace");
    const std::string profile = j.value("profile", "gaussian");
    if (chart != "halfspace" && chart != "horospherical")
      throw Error(ErrorCode::ConfigError, "family.chart must be \"halfspace\" or \"horospherical\"");
    if (profile != "gaussian" && profile != "compact")
      throw Error(ErrorCode::ConfigError, "family.profile must be \"gaussian\" or \"compact\"");
    return std::make_shared<PerturbedHyperbolic>(
        real_from_json(j, "K0"), real_from_json(j, "eps"), vec3_from_json(j, "bump_center"),
        real_from_json(j, "bump_width"),
        chart == "halfspace" ? HyperbolicChart::Halfspace : HyperbolicChart::Horospherical,
        profile == "gaussian" ? BumpProfile::Gaussian : BumpProfile::Compact);
  }
  if (name == "pulled_back_hyperbolic")
    return std::make_shared<PulledBackHyperbolic>(
        real_from_json(j, "K0"), real_from_json(j, "eta"), vec3_from_json(j, "bump_center"),
        real_from_json(j, "bump_width"));
  if (name == "periodic_synthetic")
    return std::make_shared<PeriodicSynthetic>(real_from_json(j, "eps"), vec3_from_json(j, "lengths"),
                                               vec3_from_json(j, "origin"));
  if (name == "frame_chart") return frame_chart_from_json(j);
  if (name == "plane_wave") {
    SymMat3 V;
    const auto& v = j.at("V");
    for (int s = 0; s < 6; ++s) V[s] = v.at(s).get<double>();
    return std::make_shared<PlaneWaveFamily>(family_from_json(j.at("background")), V,
                                             vec3_from_json(j, "k"), real_from_json(j, "delta"),
                                             real_from_json(j, "amplitude"), vec3_from_json(j, "x0"));
  }
  throw Error(ErrorCode::ConfigError, "unknown family name \"" + name + "\"");
}

}  // namespace xcf
