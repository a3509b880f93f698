#include "vmhs/diagnostics_csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vmhs/errors.hpp"

namespace vmhs {

const char* const kDiagnosticsCsvHeader =
    "t,e_u_alpha,e_b_alpha,dissipation_cum,energy_defect,helicity,helicity_drift,"
    "u_h1,dtu_alpha,mhs_residual,pressure_residual,potential_consistency,"
    "beltrami_alignment,div_psi_norm";

namespace {

constexpr int kNumColumns = 14;

void collect(const DiagnosticsRecord& r, double* v) {
    v[0] = r.t;
    v[1] = r.e_u_alpha;
    v[2] = r.e_b_alpha;
    v[3] = r.dissipation_cum;
    v[4] = r.energy_defect;
    v[5] = r.helicity;
    v[6] = r.helicity_drift;
    v[7] = r.u_h1;
    v[8] = r.dtu_alpha;
    v[9] = r.mhs_residual;
    v[10] = r.pressure_residual;
    v[11] = r.potential_consistency;
    v[12] = r.beltrami_alignment;
    v[13] = r.div_psi_norm;
}

DiagnosticsRecord scatter(const double* v) {
    DiagnosticsRecord r;
    r.t = v[0];
    r.e_u_alpha = v[1];
    r.e_b_alpha = v[2];
    r.dissipation_cum = v[3];
    r.energy_defect = v[4];
    r.helicity = v[5];
    r.helicity_drift = v[6];
    r.u_h1 = v[7];
    r.dtu_alpha = v[8];
    r.mhs_residual = v[9];
    r.pressure_residual = v[10];
    r.potential_consistency = v[11];
    r.beltrami_alignment = v[12];
    r.div_psi_norm = v[13];
    return r;
}

}  // namespace

std::string format_diagnostics_row(const DiagnosticsRecord& record) {
    double v[kNumColumns];
    collect(record, v);
    std::string row;
    char buf[40];
    for (int i = 0; i < kNumColumns; ++i) {
        if (!std::isfinite(v[i]))
            throw IoError("diagnostics row at t = " + std::to_string(record.t) +
                          " contains a non-finite value (column " + std::to_string(i) + ")");
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        if (i > 0) row += ',';
        row += buf;
    }
    return row;
}

void append_diagnostics(const DiagnosticsRecord& record, const std::string& csv_path) {
    const std::string row = format_diagnostics_row(record);
    const bool need_header =
        !std::filesystem::exists(csv_path) || std::filesystem::file_size(csv_path) == 0;
    std::ofstream out(csv_path, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot open " + csv_path + " for append");
    if (need_header) out << kDiagnosticsCsvHeader << '\n';
    out << row << '\n';
    if (!out) throw IoError("write to " + csv_path + " failed");
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& csv_path) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError("cannot open " + csv_path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(csv_path + ": empty diagnostics file");
    if (line != kDiagnosticsCsvHeader)
        throw IoError(csv_path + ": unexpected diagnostics header");
    std::vector<DiagnosticsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double v[kNumColumns];
        const char* p = line.c_str();
        for (int i = 0; i < kNumColumns; ++i) {
            char* end = nullptr;
            v[i] = std::strtod(p, &end);
            if (end == p) throw IoError(csv_path + ": malformed row '" + line + "'");
            p = end;
            if (i + 1 < kNumColumns) {
                if (*p != ',') throw IoError(csv_path + ": malformed row '" + line + "'");
                ++p;
            }
        }
        out.push_back(scatter(v));
    }
    return out;
}

}  // namespace vmhs
