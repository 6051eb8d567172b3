#include "hemopipe/beer_lambert.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hemopipe/errors.hpp"

namespace hemopipe::beer {

double optical_density_delta(double i_baseline, double i_t, LogBase base) {
    if (!std::isfinite(i_baseline) || !(i_baseline > 0.0)) {
        throw DomainError("baseline intensity must be positive");
    }
    if (!std::isfinite(i_t) || !(i_t > 0.0)) {
        throw DomainError("intensity must be positive");
    }
    const double ratio = i_baseline / i_t;
    return base == LogBase::Decadic ? std::log10(ratio) : std::log(ratio);
}

ConcentrationPair invert_concentrations(double dd_l1, double dd_l2,
                                        const ExtinctionTable& table,
                                        double singularity_tolerance) {
    table.validate(singularity_tolerance);
    const double det = table.determinant();
    const double l = table.path_length_cm;
    ConcentrationPair out;
    out.d_chbo2 = (table.eps_hb_l2 * dd_l1 - table.eps_hb_l1 * dd_l2) / (l * det);
    out.d_chb = (table.eps_hbo2_l2 * dd_l1 - table.eps_hbo2_l1 * dd_l2) / (l * -det);
    return out;
}

DensityPair forward_density(double d_chbo2, double d_chb,
                            const ExtinctionTable& table) {
    table.validate();
    const double l = table.path_length_cm;
    DensityPair out;
    out.dd_l1 = l * (table.eps_hbo2_l1 * d_chbo2 + table.eps_hb_l1 * d_chb);
    out.dd_l2 = l * (table.eps_hbo2_l2 * d_chbo2 + table.eps_hb_l2 * d_chb);
    return out;
}

ConcentrationPair absolute_concentrations(double d_l1, double d_l2,
                                          const ExtinctionTable& table,
                                          double singularity_tolerance) {
    return invert_concentrations(d_l1, d_l2, table, singularity_tolerance);
}

ExtinctionTable load_extinction_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open extinction table: " + path);
    }
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(val);
        if (key.empty()) continue;
        try {
            kv[key] = std::stod(val);
        } catch (const std::exception&) {
            throw SchemaError("bad numeric value for key '" + key + "' in " + path);
        }
    }
    ExtinctionTable t;
    auto require = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw SchemaError(std::string("missing key '") + key + "' in " + path);
        }
        return it->second;
    };
    t.eps_hbo2_l1 = require("eps_hbo2_l1");
    t.eps_hb_l1 = require("eps_hb_l1");
    t.eps_hbo2_l2 = require("eps_hbo2_l2");
    t.eps_hb_l2 = require("eps_hb_l2");
    if (kv.count("path_length_cm")) t.path_length_cm = kv["path_length_cm"];
    t.validate();
    return t;
}

}  // namespace hemopipe::beer
