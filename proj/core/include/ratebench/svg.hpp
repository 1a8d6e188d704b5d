#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ratebench::svg {

// Escapes &, <, >, " and ' for text and attribute values.
std::string escape(std::string_view text);

// Formats a coordinate with three decimals; "-0.000" is written as "0.000".
std::string num(double v);

// Appends SVG 1.1 elements to an in-memory document.
class Document {
 public:
  Document(double width, double height, std::string_view format_tag);

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra = {});
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double width = 1.0);
  void polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                double width = 1.0);
  void text(double x, double y, std::string_view content, double size = 12.0,
            std::string_view anchor = "start");
  void open_group(std::string_view id);
  void close_group();
  // Raw markup, for callers that need something the helpers do not cover.
  void raw(std::string_view markup);

  std::string finish() const;

 private:
  std::string body_;
  double width_, height_;
  std::string tag_;
};

}  // namespace ratebench::svg
