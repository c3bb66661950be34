#pragma once

#include <string>
#include <vector>

namespace bcsdn::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Plain line chart, one polyline per series, with axis labels and a legend.
std::string line_chart(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label);

}  // namespace bcsdn::cli
