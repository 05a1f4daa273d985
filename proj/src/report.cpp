#include <hypolab/report.hpp>

#include <hypolab/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypolab::report {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return buf.data();
}

namespace {

void dump_into(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * static_cast<std::size_t>(depth + 1), ' ');
  const std::string close(2 * static_cast<std::size_t>(depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        dump_into(it.value(), depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Flat numeric arrays stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_number() || e.is_null(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_into(e, depth + 1, out);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double x, int digits = 2) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*f", digits, x);
  return buf.data();
}

std::string tick_label(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.3g", v);
  return buf.data();
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;
  double map(double v) const { return log ? std::log10(v) : v; }
};

Axis fit_axis(const std::vector<const std::vector<double>*>& data, bool log) {
  Axis a;
  a.log = log;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto* d : data) {
    for (const double v : *d) {
      if (!std::isfinite(v) || (log && v <= 0.0)) continue;
      lo = std::min(lo, a.map(v));
      hi = std::max(hi, a.map(v));
    }
  }
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double margin = 0.05 * (hi - lo);
  a.lo = lo - margin;
  a.hi = hi + margin;
  return a;
}

std::vector<double> ticks(const Axis& a) {
  std::vector<double> t;
  if (a.log && a.hi - a.lo >= 1.0) {
    for (double e = std::ceil(a.lo); e <= a.hi; e += 1.0) t.push_back(e);
    while (t.size() > 8) {
      std::vector<double> half;
      for (std::size_t i = 0; i < t.size(); i += 2) half.push_back(t[i]);
      t = half;
    }
    return t;
  }
  for (int i = 0; i <= 4; ++i) t.push_back(a.lo + (a.hi - a.lo) * (0.1 + 0.2 * i));
  return t;
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  dump_into(j, 0, out);
  out += "\n";
  return out;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

Json table_to_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  return Json{{"columns", t.columns}, {"rows", rows}};
}

Table table_from_json(const Json& j) {
  Table t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(v.is_null() ? NAN : v.get<double>());
    if (row.size() != t.columns.size()) throw Error("table row width does not match its header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string to_svg(const Plot& p) {
  constexpr double W = 720, H = 460, left = 80, right = 30, top = 50, bottom = 60;
  constexpr std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  std::vector<const std::vector<double>*> xs, ys;
  for (const auto& s : p.series) {
    xs.push_back(&s.x);
    ys.push_back(&s.y);
  }
  const Axis ax = fit_axis(xs, p.log_x), ay = fit_axis(ys, p.log_y);
  auto px = [&](double v) { return left + (ax.map(v) - ax.lo) / (ax.hi - ax.lo) * (W - left - right); };
  auto py = [&](double v) { return H - bottom - (ay.map(v) - ay.lo) / (ay.hi - ay.lo) * (H - top - bottom); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(p.title)
    << "</text>\n";
  s << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << W - left - right << "\" height=\""
    << H - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const double t : ticks(ax)) {
    const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * (W - left - right);
    s << "<line x1=\"" << fixed(x) << "\" y1=\"" << H - bottom << "\" x2=\"" << fixed(x) << "\" y2=\""
      << H - bottom + 5 << "\" stroke=\"black\"/>";
    s << "<text x=\"" << fixed(x) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">"
      << tick_label(ax.log ? std::pow(10.0, t) : t) << "</text>\n";
  }
  for (const double t : ticks(ay)) {
    const double y = H - bottom - (t - ay.lo) / (ay.hi - ay.lo) * (H - top - bottom);
    s << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(y) << "\" x2=\"" << left << "\" y2=\"" << fixed(y)
      << "\" stroke=\"black\"/>";
    s << "<text x=\"" << left - 8 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">"
      << tick_label(ay.log ? std::pow(10.0, t) : t) << "</text>\n";
  }
  s << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
    << xml_escape(p.x_label + (p.log_x ? " (log scale)" : "")) << "</text>\n";
  s << "<text transform=\"translate(20," << (top + H - bottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(p.y_label + (p.log_y ? " (log scale)" : "")) << "</text>\n";

  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& se = p.series[k];
    const char* color = colors[k % colors.size()];
    std::string points;
    for (std::size_t i = 0; i < std::min(se.x.size(), se.y.size()); ++i) {
      const double x = se.x[i], y = se.y[i];
      if (!std::isfinite(x) || !std::isfinite(y) || (p.log_x && x <= 0) || (p.log_y && y <= 0)) continue;
      points += fixed(px(x)) + "," + fixed(py(y)) + " ";
      s << "<circle cx=\"" << fixed(px(x)) << "\" cy=\"" << fixed(py(y)) << "\" r=\"2.5\" fill=\"" << color
        << "\"/>";
    }
    if (!points.empty()) {
      points.pop_back();
      s << "\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
        << "\"/>\n";
    }
    s << "<text x=\"" << left + 12 << "\" y=\"" << top + 18 + 16 * static_cast<double>(k) << "\" fill=\"" << color
      << "\">" << xml_escape(se.name) << "</text>\n";
  }
  if (!p.annotation.empty()) {
    s << "<text class=\"annotation\" x=\"" << W - right - 10 << "\" y=\"" << H - bottom - 12
      << "\" text-anchor=\"end\">" << xml_escape(p.annotation) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

Json plot_to_json(const Plot& p) {
  Json series = Json::array();
  for (const auto& s : p.series) series.push_back(Json{{"name", s.name}, {"x", s.x}, {"y", s.y}});
  return Json{{"title", p.title},   {"x_label", p.x_label},       {"y_label", p.y_label}, {"log_x", p.log_x},
              {"log_y", p.log_y},   {"annotation", p.annotation}, {"series", series}};
}

Plot plot_from_json(const Json& j) {
  Plot p;
  p.title = j.value("title", "");
  p.x_label = j.value("x_label", "");
  p.y_label = j.value("y_label", "");
  p.log_x = j.value("log_x", false);
  p.log_y = j.value("log_y", false);
  p.annotation = j.value("annotation", "");
  auto values = [](const Json& arr) {
    std::vector<double> v;
    for (const auto& e : arr) v.push_back(e.is_null() ? NAN : e.get<double>());
    return v;
  };
  for (const auto& s : j.value("series", Json::array())) {
    p.series.push_back(Series{s.value("name", ""), values(s.at("x")), values(s.at("y"))});
  }
  return p;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw Error("write to " + path.string() + " failed");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace hypolab::report
