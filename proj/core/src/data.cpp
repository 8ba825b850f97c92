#include "ics/data.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "ics/error.hpp"
#include "ics/text_io.hpp"
#include "random.hpp"

namespace ics {
namespace {


std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

std::vector<std::uint8_t> parse_label_line(const std::string& line,
                                           std::size_t m, std::size_t lineno) {
  if (line.size() != m) {
    throw ParseError(lineno, "expected " + std::to_string(m) +
                                 " label characters, got " +
                                 std::to_string(line.size()));
  }
  std::vector<std::uint8_t> labels(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (line[i] != '0' && line[i] != '1') {
      throw ParseError(lineno, "label characters must be 0 or 1");
    }
    labels[i] = line[i] == '1';
  }
  return labels;
}

}  // namespace

std::vector<std::size_t> MultiLabelSample::positive_labels() const {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (labels[m]) out.push_back(m);
  }
  return out;
}

bool Dataset::has_proportions() const {
  return !samples.empty() &&
         std::all_of(samples.begin(), samples.end(),
                     [](const auto& s) { return s.proportions.has_value(); });
}

void Dataset::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const std::string where = "sample " + std::to_string(i);
    if (s.features.size() != d_features) {
      throw DataError(where + ": expected " + std::to_string(d_features) +
                      " features");
    }
    if (s.labels.size() != m_labels) {
      throw DataError(where + ": expected " + std::to_string(m_labels) +
                      " labels");
    }
    const auto pos = s.positive_labels();
    if (pos.empty()) throw DataError(where + " has no positive label");
    if (s.proportions) {
      if (s.proportions->size() != pos.size()) {
        throw DataError(where + ": proportion count does not match labels");
      }
      double total = 0.0;
      for (double p : *s.proportions) {
        if (!(p >= 0.0)) throw DataError(where + ": negative proportion");
        total += p;
      }
      if (std::abs(total - 1.0) > 1e-6) {
        throw DataError(where + ": proportions do not sum to 1");
      }
    }
  }
}

void SyntheticSpec::validate() const {
  if (n_samples == 0 || d_features == 0 || m_labels == 0) {
    throw ArgumentError("synthetic spec counts must be positive");
  }
  if (min_labels < 1 || min_labels > max_labels || max_labels > m_labels) {
    throw ArgumentError("labels per sample must satisfy 1 <= min <= max <= M");
  }
  if (!(dirichlet_alpha > 0.0)) {
    throw ArgumentError("dirichlet_alpha must be positive");
  }
  if (!(noise_sigma >= 0.0)) {
    throw ArgumentError("noise_sigma must be nonnegative");
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  auto anchor_rng = detail::make_engine(spec.seed, 1);
  auto sample_rng = detail::make_engine(spec.seed, 2);

  std::vector<std::vector<double>> anchors(spec.m_labels);
  for (auto& mu : anchors) {
    double norm = 0.0;
    do {
      mu.assign(spec.d_features, 0.0);
      norm = 0.0;
      for (auto& x : mu) {
        x = detail::normal(anchor_rng);
        norm += x * x;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& x : mu) x /= norm;
  }

  Dataset data;
  data.d_features = spec.d_features;
  data.m_labels = spec.m_labels;
  data.samples.reserve(spec.n_samples);
  std::vector<std::size_t> pool(spec.m_labels);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    const std::size_t c =
        spec.min_labels +
        detail::uniform_index(sample_rng, spec.max_labels - spec.min_labels + 1);
    // Partial Fisher-Yates: the first c slots become a uniform c-subset.
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t t = 0; t < c; ++t) {
      const std::size_t j = t + detail::uniform_index(sample_rng, pool.size() - t);
      std::swap(pool[t], pool[j]);
    }
    std::vector<std::size_t> chosen(pool.begin(), pool.begin() + c);
    std::sort(chosen.begin(), chosen.end());

    std::vector<double> pi(c, 1.0);
    if (c > 1) {
      double total = 0.0;
      do {
        total = 0.0;
        for (auto& p : pi) {
          p = detail::gamma(sample_rng, spec.dirichlet_alpha);
          total += p;
        }
      } while (!(total > 0.0));
      for (auto& p : pi) p /= total;
    }

    MultiLabelSample s;
    s.labels.assign(spec.m_labels, 0);
    s.features.assign(spec.d_features, 0.0);
    for (std::size_t j = 0; j < c; ++j) {
      s.labels[chosen[j]] = 1;
      const auto& mu = anchors[chosen[j]];
      for (std::size_t f = 0; f < spec.d_features; ++f) {
        s.features[f] += pi[j] * mu[f];
      }
    }
    if (spec.noise_sigma > 0.0) {
      for (auto& x : s.features) x += detail::normal(sample_rng, 0.0, spec.noise_sigma);
    }
    s.proportions = std::move(pi);
    data.samples.push_back(std::move(s));
  }
  return data;
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << data.samples.size() << ' ' << data.d_features << ' ' << data.m_labels
      << '\n';
  for (const auto& s : data.samples) {
    for (std::size_t f = 0; f < s.features.size(); ++f) {
      if (f) out << ' ';
      out << format_double(s.features[f]);
    }
    out << '\n';
    for (auto l : s.labels) out << (l ? '1' : '0');
    out << '\n';
    if (s.proportions) {
      for (std::size_t j = 0; j < s.proportions->size(); ++j) {
        if (j) out << ' ';
        out << format_double((*s.proportions)[j]);
      }
      out << '\n';
    } else {
      out << "-\n";
    }
  }
}

Dataset read_dataset(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "empty dataset file");
  auto header = split_whitespace(line);
  if (header.size() != 3) throw ParseError(1, "expected header 'N D M'");
  Dataset data;
  const std::size_t n = parse_uint(header[0], 1);
  data.d_features = parse_uint(header[1], 1);
  data.m_labels = parse_uint(header[2], 1);
  if (data.d_features == 0 || data.m_labels == 0) {
    throw ParseError(1, "D and M must be positive");
  }
  data.samples.reserve(n);

  auto require_line = [&](const char* what) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_number() + 1, std::string("missing ") + what);
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    MultiLabelSample s;
    require_line("feature row");
    auto tokens = split_whitespace(line);
    if (tokens.size() != data.d_features) {
      throw ParseError(reader.line_number(),
                       "expected " + std::to_string(data.d_features) +
                           " features, got " + std::to_string(tokens.size()));
    }
    s.features.reserve(tokens.size());
    for (auto t : tokens) s.features.push_back(parse_double(t, reader.line_number()));

    require_line("label row");
    s.labels = parse_label_line(line, data.m_labels, reader.line_number());
    const std::size_t c = static_cast<std::size_t>(
        std::count(s.labels.begin(), s.labels.end(), 1));
    if (c == 0) {
      throw DataError("sample " + std::to_string(i) + " (line " +
                      std::to_string(reader.line_number()) +
                      ") has no positive label");
    }

    require_line("proportion row");
    if (line != "-") {
      tokens = split_whitespace(line);
      if (tokens.size() != c) {
        throw ParseError(reader.line_number(),
                         "expected " + std::to_string(c) + " proportions or '-'");
      }
      std::vector<double> p;
      double total = 0.0;
      for (auto t : tokens) {
        p.push_back(parse_double(t, reader.line_number()));
        total += p.back();
      }
      if (std::abs(total - 1.0) > 1e-6 ||
          std::any_of(p.begin(), p.end(), [](double x) { return x < 0.0; })) {
        throw DataError("sample " + std::to_string(i) +
                        ": proportions are not on the simplex");
      }
      s.proportions = std::move(p);
    }
    data.samples.push_back(std::move(s));
  }
  return data;
}

void save_dataset(const std::string& path, const Dataset& data) {
  auto out = open_output(path);
  write_dataset(out, data);
  if (!out) throw IoError(path, "write failed");
}

Dataset load_dataset(const std::string& path) {
  auto in = open_input(path);
  return read_dataset(in);
}

Dataset read_csv_dataset(std::istream& in, std::size_t m_labels) {
  if (m_labels == 0) throw ArgumentError("m_labels must be positive");
  LineReader reader(in);
  std::string line;
  Dataset data;
  data.m_labels = m_labels;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto cells = split_on(line, ',');
    if (cells.size() <= m_labels) {
      throw ParseError(reader.line_number(),
                       "row needs features plus " + std::to_string(m_labels) +
                           " label columns");
    }
    const std::size_t d = cells.size() - m_labels;
    if (data.samples.empty()) {
      data.d_features = d;
    } else if (d != data.d_features) {
      throw ParseError(reader.line_number(), "inconsistent column count");
    }
    MultiLabelSample s;
    for (std::size_t f = 0; f < d; ++f) {
      s.features.push_back(parse_double(cells[f], reader.line_number()));
    }
    bool any = false;
    for (std::size_t m = 0; m < m_labels; ++m) {
      const auto cell = cells[d + m];
      if (cell != "0" && cell != "1") {
        throw ParseError(reader.line_number(), "label columns must be 0 or 1");
      }
      s.labels.push_back(cell == "1");
      any = any || cell == "1";
    }
    if (!any) {
      throw DataError("sample " + std::to_string(data.samples.size()) +
                      " (line " + std::to_string(reader.line_number()) +
                      ") has no positive label");
    }
    data.samples.push_back(std::move(s));
  }
  if (data.samples.empty()) throw ParseError(1, "empty CSV dataset");
  return data;
}

Dataset load_csv_dataset(const std::string& path, std::size_t m_labels) {
  auto in = open_input(path);
  return read_csv_dataset(in, m_labels);
}

double spearman_corr(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw EvaluationError("spearman: length mismatch");
  if (a.size() < 2) throw EvaluationError("spearman: need at least 2 values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw EvaluationError("spearman: constant input");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace ics
