#include "moe/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <nlohmann/json.hpp>

namespace moe {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

namespace {

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string bool_cell(const std::optional<bool>& v) {
  if (!v) return {};
  return *v ? "true" : "false";
}

}  // namespace

std::string report_to_csv(const ConvergenceReport& report) {
  std::string out;
  out += "# schema=";
  out += kReportSchemaVersion;
  out += "\n";
  out += "n,l,m,K_n,s1,s2,s3,total,sup";
  for (double eps : report.exceedance_thresholds) out += ",exceedance@" + format_double(eps);
  out += ",kl,kappa_sq_l2,bound_holds\n";
  for (const auto& e : report.entries) {
    out += std::to_string(e.n);
    out += "," + format_double(e.sharpness);
    out += "," + std::to_string(e.m);
    out += "," + std::to_string(e.components);
    out += "," + format_double(e.s1);
    out += "," + format_double(e.s2);
    out += "," + format_double(e.s3);
    out += "," + format_double(e.total);
    out += "," + format_double(e.sup_error);
    for (double x : e.exceedance) out += "," + format_double(x);
    out += "," + opt_cell(e.kl);
    out += "," + opt_cell(e.kappa_sq_l2);
    out += "," + bool_cell(e.bound_holds);
    out += "\n";
  }
  return out;
}

std::string report_to_json(const ConvergenceReport& report) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["target"] = report.target;
  doc["kernel"] = report.kernel;
  doc["p"] = report.p;
  doc["exceedance_thresholds"] = report.exceedance_thresholds;
  if (report.kappa)
    doc["kappa"] = *report.kappa;
  else
    doc["kappa"] = nullptr;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : report.entries) {
    nlohmann::ordered_json entry;
    entry["n"] = e.n;
    entry["l"] = e.sharpness;
    entry["m"] = e.m;
    entry["rho"] = e.rho;
    entry["K_n"] = e.components;
    entry["s1"] = e.s1;
    entry["s2"] = e.s2;
    entry["s3"] = e.s3;
    entry["total"] = e.total;
    entry["sup"] = e.sup_error;
    nlohmann::ordered_json exc = nlohmann::ordered_json::object();
    for (std::size_t t = 0; t < e.exceedance.size(); ++t)
      exc[format_double(report.exceedance_thresholds[t])] = e.exceedance[t];
    entry["exceedance"] = exc;
    entry["kl"] = e.kl ? nlohmann::ordered_json(*e.kl) : nlohmann::ordered_json(nullptr);
    entry["kappa_sq_l2"] =
        e.kappa_sq_l2 ? nlohmann::ordered_json(*e.kappa_sq_l2) : nlohmann::ordered_json(nullptr);
    entry["bound_holds"] =
        e.bound_holds ? nlohmann::ordered_json(*e.bound_holds) : nlohmann::ordered_json(nullptr);
    entry["quad_tol"] = e.quad_tol;
    doc["entries"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace moe
