#include "shocksim/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "shocksim/errors.hpp"
#include "shocksim/textio.hpp"
#include "shocksim/version.hpp"

namespace shocksim {

void write_snapshot(const std::string& path, const FieldState& state,
                    const std::string& config_hash, const std::string& format) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SimError("cannot open snapshot file '" + path + "'");
    const Grid3& g = state.grid;
    f << "# shocksim snapshot version=" << kVersion << " config=" << config_hash << "\n";
    f << "# s=" << fmt_g17(state.s) << " n=(" << g.n1 << "," << g.n2 << "," << g.n3
      << ") extent=(" << fmt_g17(g.extent.x1) << "," << fmt_g17(g.extent.x2) << ","
      << fmt_g17(g.extent.x3) << ") fields=" << (state.has_za ? "W,Z,A2,A3" : "W") << "\n";
    f << "# payload=" << format << "\n";

    const Field* fields[4] = {&state.W, &state.Z, &state.A2, &state.A3};
    const int nfields = state.has_za ? 4 : 1;
    if (format == "binary") {
        for (int q = 0; q < nfields; ++q)
            f.write(reinterpret_cast<const char*>(fields[q]->data()),
                    static_cast<std::streamsize>(fields[q]->size() * sizeof(double)));
    } else {
        for (std::size_t id = 0; id < g.size(); ++id) {
            for (int q = 0; q < nfields; ++q) {
                if (q) f << ',';
                f << fmt_g17((*fields[q])[id]);
            }
            f << '\n';
        }
    }
}

FieldState read_snapshot(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SimError("cannot open snapshot file '" + path + "'");
    std::string line;
    std::getline(f, line);  // version line
    std::getline(f, line);
    double s = 0.0, e1 = 0.0, e2 = 0.0, e3 = 0.0;
    int n1 = 0, n2 = 0, n3 = 0;
    char fields_buf[32] = {0};
    if (std::sscanf(line.c_str(), "# s=%lf n=(%d,%d,%d) extent=(%lf,%lf,%lf) fields=%31s",
                    &s, &n1, &n2, &n3, &e1, &e2, &e3, fields_buf) != 8)
        throw SimError("malformed snapshot header: " + line);
    std::getline(f, line);
    const bool binary = line.find("binary") != std::string::npos;
    const bool with_za = std::string(fields_buf) != "W";

    FieldState state(Grid3(n1, n2, n3, {e1, e2, e3}), s, with_za);
    Field* fields[4] = {&state.W, &state.Z, &state.A2, &state.A3};
    const int nfields = with_za ? 4 : 1;
    if (binary) {
        for (int q = 0; q < nfields; ++q) {
            f.read(reinterpret_cast<char*>(fields[q]->data()),
                   static_cast<std::streamsize>(fields[q]->size() * sizeof(double)));
            if (!f) throw SimError("truncated snapshot payload");
        }
    } else {
        for (std::size_t id = 0; id < state.grid.size(); ++id) {
            if (!std::getline(f, line)) throw SimError("truncated snapshot payload");
            std::istringstream is(line);
            for (int q = 0; q < nfields; ++q) {
                std::string cell;
                if (!std::getline(is, cell, ',')) throw SimError("short snapshot row");
                (*fields[q])[id] = std::stod(cell);
            }
        }
    }
    return state;
}

} // namespace shocksim
