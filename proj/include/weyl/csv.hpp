#pragma once

// Grid CSV format: header, then one row per grid point with
// index, coordinate, re, im, magnitude at 17 significant digits, so a
// parse(emit(g)) round trip reproduces every double exactly.

#include <cstdio>
#include <string>
#include <vector>

#include "weyl/common.hpp"

namespace weyl::csv {

struct IOError : std::runtime_error {
    explicit IOError(const std::string &msg) : std::runtime_error(msg) {}
};

struct Grid {
    std::string coord_name;  // "x" or "t"
    std::vector<double> coord;
    std::vector<cplx> value;

    bool operator==(const Grid &) const = default;
};

inline void emit_grid(const Grid &g, const std::string &path) {
    FILE *f = std::fopen(path.c_str(), "wb");
    if (!f) throw IOError("cannot open " + path + " for writing");
    bool ok = std::fprintf(f, "index,%s,re,im,magnitude\n", g.coord_name.c_str()) >= 0;
    for (size_t i = 0; ok && i < g.coord.size(); ++i)
        ok = std::fprintf(f, "%zu,%.17g,%.17g,%.17g,%.17g\n", i, g.coord[i],
                          g.value[i].real(), g.value[i].imag(), std::abs(g.value[i])) >= 0;
    ok = std::fclose(f) == 0 && ok;
    if (!ok) throw IOError("write failed for " + path);
}

inline Grid parse_grid(const std::string &path) {
    FILE *f = std::fopen(path.c_str(), "rb");
    if (!f) throw IOError("cannot open " + path);
    Grid g;
    char header[256];
    if (!std::fgets(header, sizeof header, f)) {
        std::fclose(f);
        throw IOError("empty csv " + path);
    }
    std::string h(header);
    size_t c1 = h.find(','), c2 = h.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        std::fclose(f);
        throw IOError("bad csv header in " + path);
    }
    g.coord_name = h.substr(c1 + 1, c2 - c1 - 1);
    size_t idx;
    double coord, re, im, mag;
    while (std::fscanf(f, "%zu,%lg,%lg,%lg,%lg\n", &idx, &coord, &re, &im, &mag) == 5) {
        g.coord.push_back(coord);
        g.value.emplace_back(re, im);
    }
    std::fclose(f);
    return g;
}

}  // namespace weyl::csv
