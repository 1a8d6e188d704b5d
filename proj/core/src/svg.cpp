#include "ratebench/svg.hpp"

#include <fmt/format.h>

namespace ratebench::svg {

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::string s = fmt::format("{:.3f}", v);
  if (s == "-0.000") s = "0.000";
  return s;
}

Document::Document(double width, double height, std::string_view format_tag)
    : width_(width), height_(height), tag_(format_tag) {}

void Document::rect(double x, double y, double w, double h, std::string_view fill, std::string_view extra) {
  body_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"", num(x), num(y), num(w),
                       num(h), fill);
  if (!extra.empty()) {
    body_ += ' ';
    body_ += extra;
  }
  body_ += "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, std::string_view stroke, double width) {
  body_ += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"/>\n",
                       num(x1), num(y1), num(x2), num(y2), stroke, num(width));
}

void Document::polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                        double width) {
  body_ += "<polyline fill=\"none\" stroke=\"";
  body_ += stroke;
  body_ += "\" stroke-width=\"" + num(width) + "\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) body_ += ' ';
    body_ += num(points[i].first) + "," + num(points[i].second);
  }
  body_ += "\"/>\n";
}

void Document::text(double x, double y, std::string_view content, double size, std::string_view anchor) {
  body_ += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"{}\">{}</text>\n", num(x),
      num(y), num(size), anchor, escape(content));
}

void Document::open_group(std::string_view id) { body_ += fmt::format("<g id=\"{}\">\n", escape(id)); }

void Document::close_group() { body_ += "</g>\n"; }

void Document::raw(std::string_view markup) { body_ += markup; }

std::string Document::finish() const {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format("<!-- {} -->\n", tag_);
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
      num(width_), num(height_), num(width_), num(height_));
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

}  // namespace ratebench::svg
