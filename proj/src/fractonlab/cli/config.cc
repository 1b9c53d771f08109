// Copyright 2026 The Fractonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fractonlab/cli/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fractonlab {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"model", {"code", "sector", "L", "p"}},
    {"ensemble", {"N_d", "N_T", "tau", "seed"}},
    {"ladder", {"beta_min", "beta_max", "scheme", "betas", "tune"}},
    {"tempering", {"swap_cadence", "microcanonical_per_metropolis"}},
    {"analysis", {"min_equilibrated_fraction"}},
};

std::string trim(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

class Fields {
   public:
    explicit Fields(const pt::ptree &tree) : tree_(tree) {
    }

    std::optional<std::string> get(const std::string &path) const {
        auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'));
        if (!v) {
            return std::nullopt;
        }
        return trim(*v);
    }

    std::string required(const std::string &path) const {
        auto v = get(path);
        if (!v || v->empty()) {
            throw std::invalid_argument("Missing required config field '" + path + "'.");
        }
        return *v;
    }

   private:
    const pt::ptree &tree_;
};

template <typename T>
T parse_number(const std::string &text, const std::string &field) {
    T value{};
    const char *end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument("Config field '" + field + "': cannot parse '" + text + "' as a number.");
    }
    return value;
}

bool parse_bool(const std::string &text, const std::string &field) {
    if (text == "true" || text == "yes" || text == "1") {
        return true;
    }
    if (text == "false" || text == "no" || text == "0") {
        return false;
    }
    throw std::invalid_argument("Config field '" + field + "': expected true or false, got '" + text + "'.");
}

template <typename T>
std::vector<T> parse_list(const std::string &text, const std::string &field) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number<T>(trim(item), field));
    }
    if (out.empty()) {
        throw std::invalid_argument("Config field '" + field + "' is empty.");
    }
    return out;
}

template <typename F>
auto field_error(const std::string &field, F &&f) {
    try {
        return f();
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument("Config field '" + field + "': " + e.what());
    }
}

}  // namespace

RunConfig parse_run_config(const std::string &text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw std::invalid_argument(std::string("Malformed config: ") + e.what());
    }
    for (const auto &[section, body] : tree) {
        auto known = kKnownKeys.find(section);
        if (known == kKnownKeys.end() || body.empty()) {
            throw std::invalid_argument("Unknown config section or top-level key '" + section + "'.");
        }
        for (const auto &[key, value] : body) {
            if (!known->second.count(key)) {
                throw std::invalid_argument("Unknown config field '" + section + "." + key + "'.");
            }
        }
    }
    Fields f(tree);

    EnsembleConfig base;
    base.code = field_error("model.code", [&] { return parse_code_kind(f.required("model.code")); });
    if (auto s = f.get("model.sector")) {
        base.sector = field_error("model.sector", [&] { return parse_pauli_type(*s); });
    }
    auto sizes = parse_list<int>(f.required("model.L"), "model.L");
    auto rates = parse_list<double>(f.required("model.p"), "model.p");
    base.realizations = parse_number<uint32_t>(f.required("ensemble.N_d"), "ensemble.N_d");
    base.temperatures = parse_number<uint32_t>(f.required("ensemble.N_T"), "ensemble.N_T");
    base.tau = parse_number<int>(f.required("ensemble.tau"), "ensemble.tau");
    base.seed = parse_number<uint64_t>(f.required("ensemble.seed"), "ensemble.seed");
    if (auto b = f.get("ladder.betas")) {
        base.betas = parse_list<double>(*b, "ladder.betas");
        if (base.betas.size() != base.temperatures) {
            throw std::invalid_argument("Config field 'ladder.betas' must list exactly N_T values.");
        }
        base.beta_min = base.betas.front();
        base.beta_max = base.betas.back();
    } else {
        base.beta_min = parse_number<double>(f.required("ladder.beta_min"), "ladder.beta_min");
        base.beta_max = parse_number<double>(f.required("ladder.beta_max"), "ladder.beta_max");
    }
    if (auto s = f.get("ladder.scheme")) {
        base.ladder_scheme = field_error("ladder.scheme", [&] { return parse_ladder_scheme(*s); });
    }
    if (auto s = f.get("ladder.tune")) {
        base.tune_ladder = parse_bool(*s, "ladder.tune");
    }
    if (auto s = f.get("tempering.swap_cadence")) {
        base.swap_cadence = parse_number<uint32_t>(*s, "tempering.swap_cadence");
    }
    if (auto s = f.get("tempering.microcanonical_per_metropolis")) {
        base.microcanonical_per_metropolis = parse_number<uint32_t>(*s, "tempering.microcanonical_per_metropolis");
    }
    if (auto s = f.get("analysis.min_equilibrated_fraction")) {
        base.min_equilibrated_fraction = parse_number<double>(*s, "analysis.min_equilibrated_fraction");
    }

    RunConfig run;
    for (int L : sizes) {
        for (double p : rates) {
            EnsembleConfig c = base;
            c.lattice_size = L;
            c.p = p;
            c.validate();
            run.ensembles.push_back(c);
        }
    }
    return run;
}

std::string ensemble_tag(const EnsembleConfig &config) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "L%d_p%.6g", config.lattice_size, config.p);
    return buf;
}

}  // namespace fractonlab
