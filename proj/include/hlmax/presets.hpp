#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hlmax/errors.hpp"
#include "hlmax/measure.hpp"

namespace hlmax {

struct PresetParams {
  // periodic preset only
  double period = 1.0;
  std::vector<ProfileStep<double>> profile = {{0.0, 0.5, 2.0}, {0.5, 1.0, 0.0}};
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"lebesgue", "logweight", "expweight", "periodic",
                                                 "flatgap"};
  return names;
}

// lebesgue: dx. logweight: dx/(x+1). expweight: e^x dx. periodic: step profile
// repeated from 0. flatgap: dx with the density removed on [1, 2).
template <class Real = double>
DistributionMeasure<Real> preset(std::string_view name, const PresetParams& params = {}) {
  using Kind = DensityKind<Real>;
  const Real zero(0), one(1);
  if (name == "lebesgue") return DistributionMeasure<Real>({{zero, Kind{Constant<Real>{one}}}});
  if (name == "logweight")
    return DistributionMeasure<Real>({{zero, Kind{Reciprocal<Real>{one, one}}}});
  if (name == "expweight")
    return DistributionMeasure<Real>({{zero, Kind{Exponential<Real>{one, one}}}});
  if (name == "flatgap")
    return DistributionMeasure<Real>({{zero, Kind{Constant<Real>{one}}},
                                      {Real(1), Kind{Constant<Real>{zero}}},
                                      {Real(2), Kind{Constant<Real>{one}}}});
  if (name == "periodic") {
    PeriodicSpec<Real> tail{zero, Real(params.period), {}};
    for (const auto& p : params.profile) tail.profile.push_back({Real(p.a), Real(p.b), Real(p.height)});
    return DistributionMeasure<Real>({}, tail);
  }
  throw ConstructionError("unknown preset '" + std::string(name) + "'");
}

}  // namespace hlmax
