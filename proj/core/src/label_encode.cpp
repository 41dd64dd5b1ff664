#include "wildfire/label_encode.hpp"

#include <string>

#include "wildfire/error.hpp"

namespace wildfire {

Grid label_encode(const Grid& g, const std::map<double, int>& ordering) {
  Grid out(g.width(), g.height(), g.transform(), g.nodata());
  for (int r = 0; r < g.height(); ++r) {
    for (int c = 0; c < g.width(); ++c) {
      const double v = g.at(r, c);
      if (g.is_nodata_value(v)) continue;
      auto it = ordering.find(v);
      if (it == ordering.end())
        throw Error(ErrorCode::UnknownCategory,
                    "category " + std::to_string(v) + " not in ordering");
      out.set(r, c, double(it->second));
    }
  }
  return out;
}

}  // namespace wildfire
