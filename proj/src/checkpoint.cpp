#include "vmhs/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "vmhs/errors.hpp"

namespace vmhs {

namespace {

constexpr char kMagic[4] = {'V', 'M', 'H', 'S'};

std::uint64_t fnv1a64(const unsigned char* data, std::size_t len) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError(path + ": truncated checkpoint");
    return v;
}

double max_component_abs(const SpectralVectorField& f) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f.data()[i]));
    return m;
}

void validate_loaded_field(const SpectralVectorField& f, const char* name,
                           const std::string& path) {
    const double scale = max_component_abs(f);
    const std::size_t stride = f.grid().num_modes();
    for (int c = 0; c < 3; ++c)
        if (std::abs(f.data()[c * stride]) > 1e-12 * std::max(scale, 1.0))
            throw IoError(path + ": loaded " + name + " is not mean-free");
    const WavenumberGrid& g = f.grid();
    const int n = g.n(), nzh = g.nz_half();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double kxv = g.kx(i);
        for (int j = 0; j < n; ++j) {
            const double kyv = g.ky(j);
            std::size_t idx = g.index(i, j, 0);
            for (int k = 0; k < nzh; ++k, ++idx) {
                const Complex dot = kxv * f.component(0)[idx] + kyv * f.component(1)[idx] +
                                    static_cast<double>(k) * f.component(2)[idx];
                worst = std::max(worst, std::abs(dot));
            }
        }
    }
    if (worst > 1e-8 * std::max(scale, 1.0))
        throw IoError(path + ": loaded " + name + " is not solenoidal (max |k.vhat| = " +
                      std::to_string(worst) + ")");
}

}  // namespace

void save_checkpoint(const VoigtState& state, const std::string& path) {
    const std::size_t nmodes = state.u.grid().num_modes();
    const std::size_t body_doubles = 3ull * 3ull * nmodes * 2ull;
    std::vector<double> body(body_doubles);
    std::size_t pos = 0;
    for (const SpectralVectorField* f : {&state.u, &state.B, &state.psi}) {
        for (int c = 0; c < 3; ++c) {
            const Complex* src = f->component(c);
            for (std::size_t i = 0; i < nmodes; ++i) {
                body[pos++] = src[i].real();
                body[pos++] = src[i].imag();
            }
        }
    }
    const std::uint64_t checksum =
        fnv1a64(reinterpret_cast<const unsigned char*>(body.data()),
                body.size() * sizeof(double));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(kMagic, 4);
    write_pod(out, kCheckpointVersion);
    write_pod(out, static_cast<std::uint32_t>(state.u.grid().n()));
    write_pod(out, state.params.alpha);
    write_pod(out, state.params.nu);
    write_pod(out, state.t);
    write_pod(out, static_cast<std::uint32_t>(3));
    out.write(reinterpret_cast<const char*>(body.data()), body.size() * sizeof(double));
    write_pod(out, checksum);
    if (!out) throw IoError("write to " + path + " failed");
}

VoigtState load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError(path + ": not a VMHS checkpoint");
    const auto version = read_pod<std::uint32_t>(in, path);
    if (version != kCheckpointVersion)
        throw IoError(path + ": unsupported checkpoint version " + std::to_string(version));
    const auto n = read_pod<std::uint32_t>(in, path);
    const double alpha = read_pod<double>(in, path);
    const double nu = read_pod<double>(in, path);
    const double t = read_pod<double>(in, path);
    const auto field_count = read_pod<std::uint32_t>(in, path);
    if (field_count != 3)
        throw IoError(path + ": expected 3 fields, found " + std::to_string(field_count));

    GridPtr grid = make_grid(static_cast<int>(n));
    const std::size_t nmodes = grid->num_modes();
    std::vector<double> body(3ull * 3ull * nmodes * 2ull);
    in.read(reinterpret_cast<char*>(body.data()), body.size() * sizeof(double));
    if (!in) throw IoError(path + ": truncated checkpoint");
    const auto stored_checksum = read_pod<std::uint64_t>(in, path);
    const std::uint64_t checksum =
        fnv1a64(reinterpret_cast<const unsigned char*>(body.data()),
                body.size() * sizeof(double));
    if (checksum != stored_checksum) throw IoError(path + ": checksum mismatch");

    VoigtState state{SpectralVectorField(grid), SpectralVectorField(grid),
                     SpectralVectorField(grid), t, VoigtParams{}};
    state.params.alpha = alpha;
    state.params.nu = nu;
    std::size_t pos = 0;
    for (SpectralVectorField* f : {&state.u, &state.B, &state.psi}) {
        for (int c = 0; c < 3; ++c) {
            Complex* dst = f->component(c);
            for (std::size_t i = 0; i < nmodes; ++i) {
                dst[i] = Complex(body[pos], body[pos + 1]);
                pos += 2;
            }
        }
    }
    validate_loaded_field(state.u, "u", path);
    validate_loaded_field(state.B, "B", path);
    state.u.solenoidal = state.u.mean_free = true;
    state.B.solenoidal = state.B.mean_free = true;
    state.psi.mean_free = true;
    return state;
}

}  // namespace vmhs
