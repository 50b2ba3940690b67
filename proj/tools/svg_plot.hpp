#pragma once
#include <string>
#include <vector>

namespace hbarq_cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string colour;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::string comment; //!< emitted as an XML comment before the root element
  int width = 720;
  int height = 480;
};

//! Static line plot. Non-finite points and, on log axes, non-positive
//! coordinates are skipped and break the polyline.
std::string render_svg(const PlotSpec &spec, const std::vector<Series> &series);

} // namespace hbarq_cli
