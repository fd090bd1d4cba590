#include "kirchhoff/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "kirchhoff/errors.hpp"

namespace kirchhoff {

namespace {

void emit(const Json& v, std::string& out, int depth) {
  auto indent = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        indent(depth + 1);
        out += Json(key).dump();
        out += ": ";
        emit(item, out, depth + 1);
      }
      out += "\n";
      indent(depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ",\n";
        indent(depth + 1);
        emit(v[i], out, depth + 1);
      }
      out += "\n";
      indent(depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json num(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

Json conditions_json(const std::vector<Condition>& list) {
  Json arr = Json::array();
  for (const auto& c : list) {
    arr.push_back({{"name", c.name}, {"lhs", num(c.lhs)}, {"rhs", num(c.rhs)}, {"inclusive", c.inclusive},
                   {"holds", c.holds}});
  }
  return arr;
}

Json limit_json(const EndpointLimit& lim) {
  Json j;
  if (!lim.value) {
    j["value"] = nullptr;
  } else if (std::isinf(*lim.value)) {
    j["value"] = "inf";
  } else {
    j["value"] = *lim.value;
  }
  j["upperBound"] = lim.upperBound;
  return j;
}

std::string csv_cell(double x) { return std::isfinite(x) ? format_double(x) : ""; }

std::string csv_cell(const std::optional<double>& x) { return x ? csv_cell(*x) : ""; }

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump_json(const Json& value) {
  std::string out;
  emit(value, out, 0);
  out += "\n";
  return out;
}

Json to_json(const ProblemParams& p) {
  return {{"a", num(p.a)},
          {"b", num(p.b)},
          {"lambda", num(p.lambda)},
          {"mu", num(p.mu)},
          {"q", num(p.q)},
          {"p", num(p.p)},
          {"N", p.geom.dimension},
          {"R", num(p.geom.radius)},
          {"tolerances",
           {{"odeRelative", num(p.tol.odeRelative)},
            {"odeAbsolute", num(p.tol.odeAbsolute)},
            {"odeRelativeCritical", num(p.tol.odeRelativeCritical)},
            {"radius", num(p.tol.radius)},
            {"root", num(p.tol.root)}}}};
}

Json to_json(const SpectralConstants& c, const BallGeometry& geom) {
  return {{"N", geom.dimension},
          {"R", num(geom.radius)},
          {"lambda1", num(c.lambda1)},
          {"besselZero", num(bessel_first_zero(geom.dimension / 2.0 - 1.0))},
          {"sobolevS", num(c.sobolevS)},
          {"sphereArea", num(c.sphereArea)},
          {"ballVolume", num(c.ballVolume)},
          {"criticalExponent", num(critical_exponent(geom.dimension))}};
}

Json to_json(const AlphaInterval& iv) {
  return {{"lower", num(iv.lower)},
          {"upper", num(iv.upper)},
          {"lowerLabel", iv.lowerLabel},
          {"upperLabel", iv.upperLabel}};
}

Json to_json(const RegimePrediction& pred) {
  const auto& aux = pred.aux;
  Json j;
  j["caseId"] = to_string(pred.caseInfo.id);
  j["alphaInterval"] = to_json(pred.caseInfo.interval);
  j["radialityConditions"] = conditions_json(pred.caseInfo.radiality);
  j["matchedCase"] = pred.matchedCase ? Json(*pred.matchedCase) : Json(nullptr);
  j["allMatches"] = pred.allMatches;
  j["guaranteedCount"] = pred.guaranteedCount;
  j["auxiliaryConstants"] = {{"m0", num(aux.m0)},
                             {"C", num(aux.C)},
                             {"C1", num(aux.C1)},
                             {"C2", num(aux.C2)},
                             {"C3", num(aux.C3)},
                             {"twoRootLhs", num(aux.twoRootLhs)},
                             {"criticalN3Limit", num(aux.criticalN3Limit)},
                             {"criticalN3LimitAsStated", num(aux.criticalN3LimitAsStated)},
                             {"lambda0Bound", num(aux.lambda0Bound)}};
  j["conditions"] = conditions_json(pred.conditions);
  j["lowerLimit"] = limit_json(pred.lowerLimit);
  j["upperLimit"] = limit_json(pred.upperLimit);
  j["probeAlpha"] = num(pred.probeAlpha);
  j["probeAlphaAsStated"] = num(pred.probeAlphaAsStated);
  return j;
}

Json to_json(const KirchhoffSolution& s) {
  return {{"alpha", num(s.alphaRoot)},
          {"fValue", num(s.fValue)},
          {"amplitude", num(s.local.amplitude)},
          {"phi0", num(s.profile.values().front())},
          {"dirichletLocal", num(s.local.dirichletEnergy)},
          {"gradNormSq", num(s.gradNormSq)},
          {"effectiveStiffness", num(s.effectiveStiffness)},
          {"tMu", num(s.chain.tMu)},
          {"s", num(s.chain.s)},
          {"totalFactor", num(s.chain.totalFactor)},
          {"residual", num(s.residual)},
          {"localResidual", num(s.localResidual)},
          {"profileNodes", s.profile.size()}};
}

Json to_json(const RootReport& rep) {
  Json j;
  j["params"] = to_json(rep.params);
  j["alphaInterval"] = to_json(rep.interval);
  j["prediction"] = rep.prediction ? to_json(*rep.prediction) : Json(nullptr);
  Json samples = Json::array();
  for (const auto& s : rep.samples) {
    samples.push_back({{"alpha", num(s.alpha)}, {"D", num(s.dirichlet)}, {"f", num(s.f)}, {"failure", s.failure}});
  }
  j["samples"] = samples;
  Json roots = Json::array();
  for (const auto& r : rep.roots) {
    roots.push_back({{"alpha", num(r.alpha)},
                     {"bracket", {num(r.bracketLo), num(r.bracketHi)}},
                     {"iterations", r.iterations},
                     {"fMinusOne", num(r.fMinusOne)},
                     {"certified", r.certified},
                     {"residual", num(r.residual)},
                     {"note", r.note}});
  }
  j["roots"] = roots;
  Json sols = Json::array();
  for (const auto& s : rep.solutions) sols.push_back(to_json(s));
  j["solutions"] = sols;
  j["numericCount"] = rep.numericCount;
  j["agreement"] = rep.agreement;
  j["probeSeparates"] = rep.probeSeparates ? Json(*rep.probeSeparates) : Json(nullptr);
  j["warnings"] = rep.warnings;
  return j;
}

Json to_json(const LimitReport& rep) {
  Json pts = Json::array();
  for (const auto& p : rep.points) {
    pts.push_back({{"k", p.k}, {"alpha", num(p.alpha)}, {"D", num(p.dirichlet)}, {"failure", p.failure}});
  }
  return {{"caseId", to_string(rep.caseId)},
          {"endpoint", rep.endpoint == Endpoint::Lower ? "lower" : "upper"},
          {"endpointAlpha", num(rep.endpointAlpha)},
          {"points", pts},
          {"extrapolated", num(rep.extrapolated)},
          {"previousExtrapolated", num(rep.previousExtrapolated)},
          {"predicted", num(rep.predicted)},
          {"predictedLabel", rep.predictedLabel},
          {"scale", num(rep.scale)},
          {"relativeError", num(rep.relativeError)},
          {"fExtrapolated", num(rep.fExtrapolated)},
          {"fPredicted", num(rep.fPredicted)}};
}

Json to_json(const HolderReport& rep) {
  Json pts = Json::array();
  for (const auto& p : rep.points) {
    pts.push_back({{"alpha", num(p.alpha)}, {"D", num(p.dirichlet)}, {"margin", num(p.margin)},
                   {"satisfied", p.satisfied}});
  }
  return {{"bound", num(rep.bound)},
          {"slack", num(rep.slack)},
          {"allSatisfied", rep.allSatisfied},
          {"worstMargin", num(rep.worstMargin)},
          {"points", pts}};
}

Json to_json(const EnergyReport& rep) {
  return {{"alpha", num(rep.alpha)},
          {"mAlpha", num(rep.mAlpha)},
          {"gradNormSq", num(rep.gradNormSq)},
          {"lqPower", num(rep.lqPower)},
          {"lpPower", num(rep.lpPower)},
          {"nehariResidual", num(rep.nehariResidual)},
          {"iterations", rep.iterations},
          {"converged", rep.converged},
          {"gridSize", rep.profile.values.empty() ? 0 : rep.profile.intervals()}};
}

std::string fscan_csv(std::span<const FSample> samples) {
  std::string out = "alpha,D,f\n";
  for (const auto& s : samples) {
    out += csv_cell(s.alpha) + "," + csv_cell(s.dirichlet) + "," + csv_cell(s.f) + "\n";
  }
  return out;
}

std::string profile_csv(const RadialProfile& profile) {
  std::string out = "r,u,du\n";
  const auto r = profile.radii();
  const auto u = profile.values();
  const auto du = profile.derivs();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out += csv_cell(r[i]) + "," + csv_cell(u[i]) + "," + csv_cell(du[i]) + "\n";
  }
  return out;
}

std::string oracle_csv(std::span<const OracleRow> rows) {
  std::string out = "alpha,D_shoot,D_oracle,gap\n";
  for (const auto& row : rows) {
    out += csv_cell(row.alpha) + "," + csv_cell(row.dShoot) + "," + csv_cell(row.dOracle) + "," + csv_cell(row.gap) +
           "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) {
      throw Error("cannot open " + tmp.string() + " for writing");
    }
    os << content;
    os.flush();
    if (!os) {
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace kirchhoff
