#include "gvp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gvp {

namespace {

using Json = nlohmann::json;

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double parse_cell(const std::string& cell, const std::string& path, int line_no,
                  const std::string& column) {
  if (cell.empty()) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty cell in column '" +
                             column + "'");
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument("trailing characters");
    if (std::isnan(v)) throw std::invalid_argument("missing value");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": non-numeric cell '" + cell +
                             "' in column '" + column + "'");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

Json vec_to_json(const Vec& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const Json& arr) {
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DataSet load_series(const std::string& path, const std::string& y_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_row(line);
  int y_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == y_column) y_col = static_cast<int>(c);
  }
  if (y_col < 0) {
    throw std::runtime_error(path + ": no column named '" + y_column + "' in the header");
  }

  DataSet data;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) != y_col) data.x_names.push_back(header[c]);
  }
  data.x.assign(data.x_names.size(), {});

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
    }
    int xi = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_cell(cells[c], path, line_no, header[c]);
      if (static_cast<int>(c) == y_col) {
        data.y.push_back(v);
      } else {
        data.x[xi++].push_back(v);
      }
    }
  }
  if (data.y.empty()) throw std::runtime_error(path + ": no data rows");
  data.validate();
  return data;
}

void write_series(const std::string& path, const DataSet& data) {
  auto out = open_out(path);
  out << "y";
  for (const auto& name : data.x_names) out << "," << name;
  out << "\n";
  for (int t = 0; t < data.length(); ++t) {
    out << format_double(data.y[t]);
    for (int c = 0; c < data.covariates(); ++c) out << "," << format_double(data.x[c][t]);
    out << "\n";
  }
}

void write_matrix_csv(const std::string& path, const ScoreMatrix& matrix) {
  auto out = open_out(path);
  out << "update";
  for (const auto& label : matrix.eval_labels) out << "," << label;
  out << ",failed,refit_failures\n";
  for (int j = 0; j < matrix.rows(); ++j) {
    out << matrix.update_labels[j];
    for (int i = 0; i < matrix.cols(); ++i) out << "," << format_double(matrix.scores[j][i]);
    out << "," << (matrix.row_failed[j] ? 1 : 0) << "," << matrix.refit_failures[j] << "\n";
  }
}

void write_score_log_csv(const std::string& path, const ScoreMatrix& matrix,
                         const std::vector<PointScore>& log) {
  auto out = open_out(path);
  out << "update,eval,n,score,degenerate\n";
  for (const PointScore& p : log) {
    out << matrix.update_labels[p.update_rule] << "," << matrix.eval_labels[p.eval_rule] << ","
        << p.n << "," << format_double(p.value) << "," << (p.degenerate ? 1 : 0) << "\n";
  }
}

void write_coherence_csv(const std::string& path, const std::vector<ColumnCoherence>& report) {
  auto out = open_out(path);
  out << "rule,diagonal_best,margin\n";
  for (const ColumnCoherence& c : report) {
    out << c.rule << "," << (c.diagonal_best ? 1 : 0) << "," << format_double(c.margin) << "\n";
  }
}

void write_merging_csv(const std::string& path, const MergingReport& report) {
  auto out = open_out(path);
  out << "update";
  for (const auto& label : report.eval_labels) out << "," << label;
  out << "\n";
  for (std::size_t j = 0; j < report.update_labels.size(); ++j) {
    out << report.update_labels[j];
    for (double d : report.abs_diff[j]) out << "," << format_double(d);
    out << "\n";
  }
}

void write_fit(const std::string& path, const FitArtifact& fit) {
  Json j;
  j["engine"] = fit.engine;
  j["model"]["kind"] = fit.model.kind;
  j["model"]["components"] = fit.model.components;
  j["model"]["width"] = fit.model.width;
  j["model"]["activation"] = fit.model.activation == Activation::Tanh ? "tanh" : "sigmoid";
  j["model"]["inputs"] = fit.model.covariates;
  j["rule"] = fit.rule_label;
  if (fit.threshold) j["threshold"] = *fit.threshold;
  j["window"] = fit.window;
  j["weight"] = fit.weight;
  if (fit.engine == "vb") {
    j["lambda"]["mu"] = vec_to_json(fit.lambda.mu);
    j["lambda"]["d"] = vec_to_json(fit.lambda.d);
  } else {
    Json draws = Json::array();
    for (const Vec& theta : fit.draws) draws.push_back(vec_to_json(theta));
    j["draws"] = draws;
  }
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

FitArtifact read_fit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": not a fit file (" + e.what() + ")");
  }
  FitArtifact fit;
  fit.engine = j.at("engine").get<std::string>();
  fit.model.kind = j.at("model").at("kind").get<std::string>();
  fit.model.components = j.at("model").at("components").get<int>();
  fit.model.width = j.at("model").at("width").get<int>();
  fit.model.activation = j.at("model").at("activation").get<std::string>() == "sigmoid"
                             ? Activation::Sigmoid
                             : Activation::Tanh;
  fit.model.covariates = j.at("model").at("inputs").get<std::vector<std::string>>();
  fit.rule_label = j.at("rule").get<std::string>();
  if (j.contains("threshold")) fit.threshold = j.at("threshold").get<double>();
  fit.window = j.at("window").get<int>();
  fit.weight = j.at("weight").get<double>();
  if (fit.engine == "vb") {
    fit.lambda.mu = vec_from_json(j.at("lambda").at("mu"));
    fit.lambda.d = vec_from_json(j.at("lambda").at("d"));
  } else {
    for (const Json& row : j.at("draws")) fit.draws.push_back(vec_from_json(row));
  }
  return fit;
}

}  // namespace gvp
