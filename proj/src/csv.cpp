#include "sqn/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sqn {
namespace {

void append_real(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void append_optional(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (v) append_real(out, *v);
}

}  // namespace

std::string csv_header() {
  return "k,adp,work,train_fx,test_fx,test_acc,grad_error,hv_error,grad_norm";
}

std::string to_csv(const std::vector<RunRecord>& records) {
  std::string out = csv_header();
  out += '\n';
  for (const RunRecord& r : records) {
    out += std::to_string(r.k);
    out += ',';
    out += std::to_string(r.adp);
    out += ',';
    append_real(out, r.work);
    out += ',';
    append_real(out, r.train_fx);
    append_optional(out, r.test_fx);
    append_optional(out, r.test_accuracy);
    append_optional(out, r.grad_error);
    append_optional(out, r.hv_error);
    append_optional(out, r.grad_norm);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<RunRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << to_csv(records);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace sqn
