#include "rescomp/core/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rescomp/core/error.hpp"

namespace rescomp::io {

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Matrix matrix_from_json(const Json& j) {
  try {
    const Json& re = j.at("re");
    const Json& im = j.at("im");
    const Index rows = static_cast<Index>(re.size());
    if (static_cast<Index>(im.size()) != rows) throw Error(ErrorCode::InvalidArgument, "re/im row counts differ");
    const Index cols = rows == 0 ? 0 : static_cast<Index>(re.at(0).size());
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      const Json& rr = re.at(static_cast<std::size_t>(i));
      const Json& ir = im.at(static_cast<std::size_t>(i));
      if (static_cast<Index>(rr.size()) != cols || static_cast<Index>(ir.size()) != cols)
        throw Error(ErrorCode::InvalidArgument, "ragged matrix rows");
      for (Index c = 0; c < cols; ++c)
        m(i, c) = Complex(rr.at(static_cast<std::size_t>(c)).get<double>(), ir.at(static_cast<std::size_t>(c)).get<double>());
    }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed matrix JSON: ") + e.what());
  }
}

SubsystemShape shape_from_json(const Json& j) {
  try {
    return SubsystemShape(j.get<std::vector<int>>());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed shape JSON: ") + e.what());
  }
}

Json to_json(const DensityMatrix& rho) {
  Json j = matrix_to_json(rho.matrix());
  j["shape"] = rho.shape().dims();
  return j;
}

Json to_json(const HermitianOperator& h) {
  Json j = matrix_to_json(h.matrix());
  j["shape"] = h.shape().dims();
  return j;
}

Json to_json(const QuantumChannel& ch) {
  Json ops = Json::array();
  for (const Matrix& k : ch.kraus_ops()) ops.push_back(matrix_to_json(k));
  return Json{{"input_shape", ch.input_shape().dims()}, {"output_shape", ch.output_shape().dims()}, {"kraus", ops}};
}

DensityMatrix density_from_json(const Json& j) {
  if (!j.contains("shape")) throw Error(ErrorCode::InvalidArgument, "state JSON lacks a shape");
  return DensityMatrix(shape_from_json(j.at("shape")), matrix_from_json(j));
}

HermitianOperator hermitian_from_json(const Json& j) {
  if (!j.contains("shape")) throw Error(ErrorCode::InvalidArgument, "operator JSON lacks a shape");
  return HermitianOperator(shape_from_json(j.at("shape")), matrix_from_json(j));
}

QuantumChannel channel_from_json(const Json& j) {
  try {
    std::vector<Matrix> ops;
    for (const Json& k : j.at("kraus")) ops.push_back(matrix_from_json(k));
    return QuantumChannel::from_kraus(shape_from_json(j.at("input_shape")), shape_from_json(j.at("output_shape")),
                                      std::move(ops));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed channel JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse " + path + ": " + e.what());
  }
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::IoError, "cannot rename " + tmp + " onto " + path + ": " + ec.message());
  }
}

}  // namespace rescomp::io
