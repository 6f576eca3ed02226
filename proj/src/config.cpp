#include "kgraph/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace kgraph {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, int line) {
    const char* begin = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        fail(line, "expected a number, got \"" + v + "\"");
    }
    return x;
}

int to_int(const std::string& v, int line) {
    const double x = to_double(v, line);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x) {
        fail(line, "expected an integer, got \"" + v + "\"");
    }
    return i;
}

bool to_switch(const std::string& v, int line) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    fail(line, "expected on/off, got \"" + v + "\"");
}

std::vector<double> split_numbers(const std::string& v, int line) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        out.push_back(to_double(trim(item), line));
    }
    if (out.empty()) fail(line, "expected a comma-separated list");
    return out;
}

// A parsed key with its line number, consumed exactly once.
struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};
using Section = std::map<std::string, Entry>;

class Tables {
public:
    void insert(const std::string& section, const std::string& key,
                const std::string& value, int line) {
        auto [it, fresh] = sections_[section].try_emplace(key, Entry{value, line});
        if (!fresh) {
            fail(line, "duplicate key \"" + key + "\" in [" + section + "]");
        }
    }

    bool has_section(const std::string& section) const {
        return sections_.count(section) != 0;
    }

    const Entry* find(const std::string& section, const std::string& key) {
        auto sit = sections_.find(section);
        if (sit == sections_.end()) return nullptr;
        auto kit = sit->second.find(key);
        if (kit == sit->second.end()) return nullptr;
        kit->second.used = true;
        return &kit->second;
    }

    void check_consumed() const {
        for (const auto& [sname, section] : sections_) {
            for (const auto& [key, entry] : section) {
                if (!entry.used) {
                    fail(entry.line,
                         "unknown key \"" + key + "\" in [" + sname + "]");
                }
            }
        }
    }

private:
    std::map<std::string, Section> sections_;
};

std::function<double(LeafPoint)> boundary_registry(const std::string& spec,
                                                   const Domain& domain,
                                                   int line) {
    if (spec == "zero") {
        return [](LeafPoint) { return 0.0; };
    }
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "const") {
        const double v = to_double(args, line);
        return [v](LeafPoint) { return v; };
    }
    if (head == "coskt" || head == "sinkt") {
        const std::vector<double> ak = split_numbers(args, line);
        if (ak.size() != 2) fail(line, head + " needs amplitude,frequency");
        const double a = ak[0], k = ak[1];
        if (head == "coskt") {
            return [a, k](LeafPoint p) { return a * std::cos(k * p.b); };
        }
        return [a, k](LeafPoint p) { return a * std::sin(k * p.b); };
    }
    if (head == "rings") {
        if (domain.kind() != DomainKind::Annulus) {
            fail(line, "rings boundary data needs an annulus");
        }
        const std::vector<double> vv = split_numbers(args, line);
        if (vv.size() != 2) fail(line, "rings needs inner,outer values");
        const double mid = 0.5 * (domain.r_inner() + domain.r_outer());
        const double vin = vv[0], vout = vv[1];
        return [mid, vin, vout](LeafPoint p) {
            return p.a < mid ? vin : vout;
        };
    }
    fail(line, "unknown boundary data \"" + spec + "\"");
}

std::function<double(LeafPoint)> curvature_registry(const std::string& spec,
                                                    int line) {
    const auto colon = spec.find(':');
    if (spec.substr(0, colon) == "const") {
        const double v =
            to_double(colon == std::string::npos ? "" : spec.substr(colon + 1),
                      line);
        return [v](LeafPoint) { return v; };
    }
    fail(line, "unknown curvature \"" + spec + "\"");
}

} // namespace

const AmbientModel& RunConfig::effective_model() const {
    if (case_spec) return case_spec->model;
    if (!model) throw ConfigError("missing [model] section");
    return *model;
}

const Domain& RunConfig::effective_domain() const {
    if (case_spec) return case_spec->domain;
    if (!domain) throw ConfigError("missing [domain] section");
    return *domain;
}

GridKind RunConfig::effective_grid_kind() const {
    if (case_spec && grid_theta == 0 && !use_polar) {
        return case_spec->grid_kind;
    }
    if (effective_domain().kind() == DomainKind::Rectangle) {
        return GridKind::Cartesian;
    }
    return (grid_theta > 0 || use_polar) ? GridKind::Polar : GridKind::Radial;
}

int RunConfig::effective_grid() const {
    if (grid > 0) return grid;
    if (case_spec) return case_spec->grids.front();
    throw ConfigError("missing [solver] grid for an explicit setup");
}

Grid RunConfig::make_grid(int m) const {
    switch (effective_grid_kind()) {
    case GridKind::Radial:
        return Grid::radial(effective_domain(), m);
    case GridKind::Polar:
        return Grid::polar(effective_domain(), m,
                           grid_theta > 0 ? grid_theta : 2 * m);
    case GridKind::Cartesian:
        return Grid::cartesian(effective_domain(), m,
                               grid_theta > 0 ? grid_theta : m);
    }
    throw ConfigError("unknown grid kind");
}

Problem RunConfig::make_problem(int m) const {
    return Problem(effective_model(), effective_domain(), make_grid(m));
}

ScalarField RunConfig::curvature_field(const Problem& problem) const {
    if (curvature) {
        return sample_field(problem, curvature, FieldTag::Curvature);
    }
    if (case_spec) return case_spec->curvature_field(problem);
    throw ConfigError("missing [problem] H");
}

std::function<double(LeafPoint)> RunConfig::curvature_chart() const {
    if (curvature) return curvature;
    if (case_spec && case_spec->curvature) return case_spec->curvature;
    if (case_spec && case_spec->exact) {
        const AmbientModel model = case_spec->model;
        const bool polar = model.leaf.is_polar();
        const SmoothField exact = *case_spec->exact;
        return [model, polar, exact](LeafPoint p) {
            return manufactured_H_at(model, polar, p, exact);
        };
    }
    throw ConfigError("missing [problem] H");
}

RunConfig parse_config_text(const std::string& text) {
    static const std::map<std::string, std::vector<std::string>> schema = {
        {"model", {"leaf", "xi", "rho", "n"}},
        {"domain",
         {"shape", "r0", "r_in", "r_out", "x0", "x1", "y0", "y1", "phi"}},
        {"problem", {"H", "mms_case", "theorem"}},
        {"solver",
         {"grid", "grid_theta", "polar", "tol", "max_iter", "homotopy",
          "sigma_step"}},
        {"rotational", {"H0", "r0"}},
        {"mms", {"grids"}},
        {"output", {"directory"}},
    };

    Tables tables;
    {
        std::istringstream is(text);
        std::string raw;
        std::string section;
        int line = 0;
        while (std::getline(is, raw)) {
            ++line;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string s = trim(raw);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') fail(line, "unterminated section header");
                section = trim(s.substr(1, s.size() - 2));
                if (schema.find(section) == schema.end()) {
                    fail(line, "unknown section [" + section + "]");
                }
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) {
                fail(line, "expected key = value, got \"" + s + "\"");
            }
            if (section.empty()) {
                fail(line, "key outside of any section");
            }
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            const auto& keys = schema.at(section);
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                fail(line, "unknown key \"" + key + "\" in [" + section + "]");
            }
            if (value.empty()) fail(line, "empty value for \"" + key + "\"");
            tables.insert(section, key, value, line);
        }
    }

    RunConfig cfg;

    if (const Entry* e = tables.find("problem", "mms_case")) {
        if (tables.has_section("model") || tables.has_section("domain")) {
            fail(e->line,
                 "mms_case conflicts with explicit [model]/[domain] sections");
        }
        try {
            cfg.case_spec = named_case(e->value);
        } catch (const ConfigError& err) {
            fail(e->line, err.what());
        }
    } else if (tables.has_section("model") || tables.has_section("domain")) {
        const Entry* leaf = tables.find("model", "leaf");
        if (!leaf) throw ConfigError("missing [model] leaf");
        const Entry* rho = tables.find("model", "rho");
        if (!rho) throw ConfigError("missing [model] rho");
        const Entry* xi = tables.find("model", "xi");
        const Entry* ne = tables.find("model", "n");
        const int n = ne ? to_int(ne->value, ne->line) : 2;

        LeafMetric metric = [&]() -> LeafMetric {
            try {
                if (leaf->value == "euclidean-polar") {
                    if (xi) fail(xi->line, "euclidean-polar fixes xi = r");
                    return LeafMetric::euclidean_polar(n);
                }
                if (leaf->value == "rotsym") {
                    if (!xi) fail(leaf->line, "rotsym leaf needs xi");
                    return LeafMetric::rotsym(ScalarFn::parse(xi->value), n);
                }
                if (leaf->value == "cartesian-flat") {
                    if (xi) fail(xi->line, "cartesian-flat has no xi");
                    if (n != 2) fail(ne->line, "cartesian-flat is planar");
                    return LeafMetric::cartesian_flat();
                }
            } catch (const DomainError& err) {
                fail(leaf->line, err.what());
            }
            fail(leaf->line, "unknown leaf \"" + leaf->value + "\"");
        }();
        WarpingFunction warp = [&]() -> WarpingFunction {
            try {
                return WarpingFunction(ScalarFn::parse(rho->value));
            } catch (const Error& err) {
                fail(rho->line, err.what());
            }
        }();
        cfg.model = AmbientModel{std::move(metric), std::move(warp)};

        // A model without a domain is a valid rotational-profile setup;
        // solve/check runs fail later with a missing-domain error.
        if (tables.has_section("domain")) {
            const Entry* shape = tables.find("domain", "shape");
            if (!shape) throw ConfigError("missing [domain] shape");
            auto number = [&](const char* key) {
                const Entry* e = tables.find("domain", key);
                if (!e) {
                    fail(shape->line, "shape " + shape->value +
                                          " needs [domain] " + key);
                }
                return to_double(e->value, e->line);
            };
            try {
                if (shape->value == "disc") {
                    cfg.domain = Domain::disc(number("r0"));
                } else if (shape->value == "annulus") {
                    cfg.domain =
                        Domain::annulus(number("r_in"), number("r_out"));
                } else if (shape->value == "rectangle") {
                    cfg.domain = Domain::rectangle(number("x0"), number("x1"),
                                                   number("y0"), number("y1"));
                } else {
                    fail(shape->line,
                         "unknown shape \"" + shape->value + "\"");
                }
            } catch (const DomainError& err) {
                fail(shape->line, err.what());
            }
            if (const Entry* phi = tables.find("domain", "phi")) {
                cfg.domain->with_boundary_data(
                    boundary_registry(phi->value, *cfg.domain, phi->line));
            } else {
                cfg.domain->with_boundary_data([](LeafPoint) { return 0.0; });
            }
        }
    }

    if (const Entry* e = tables.find("problem", "H")) {
        if (e->value == "mms") {
            if (!cfg.case_spec || !cfg.case_spec->exact) {
                fail(e->line, "H = mms needs an mms_case with a closed form");
            }
        } else {
            cfg.curvature = curvature_registry(e->value, e->line);
        }
    }
    if (const Entry* e = tables.find("problem", "theorem")) {
        cfg.theorem = to_int(e->value, e->line);
        if (cfg.theorem < 1 || cfg.theorem > 3) {
            fail(e->line, "theorem must be 1, 2, or 3");
        }
    }

    if (const Entry* e = tables.find("solver", "grid")) {
        cfg.grid = to_int(e->value, e->line);
        if (cfg.grid < 8) fail(e->line, "grid must be at least 8");
    }
    if (const Entry* e = tables.find("solver", "grid_theta")) {
        cfg.grid_theta = to_int(e->value, e->line);
        if (cfg.grid_theta < 8) fail(e->line, "grid_theta must be at least 8");
    }
    if (const Entry* e = tables.find("solver", "polar")) {
        cfg.use_polar = to_switch(e->value, e->line);
    }
    if (const Entry* e = tables.find("solver", "tol")) {
        cfg.tol = to_double(e->value, e->line);
        if (!(cfg.tol > 0.0)) fail(e->line, "tol must be positive");
    }
    if (const Entry* e = tables.find("solver", "max_iter")) {
        cfg.max_iter = to_int(e->value, e->line);
        if (cfg.max_iter < 1) fail(e->line, "max_iter must be positive");
    }
    if (const Entry* e = tables.find("solver", "homotopy")) {
        cfg.homotopy = to_switch(e->value, e->line);
    }
    if (const Entry* e = tables.find("solver", "sigma_step")) {
        cfg.sigma_step = to_double(e->value, e->line);
        if (!(cfg.sigma_step > 0.0) || cfg.sigma_step > 0.25) {
            fail(e->line, "sigma_step must lie in (0, 0.25]");
        }
    }

    if (const Entry* e = tables.find("rotational", "H0")) {
        cfg.rot_H0 = to_double(e->value, e->line);
    }
    if (const Entry* e = tables.find("rotational", "r0")) {
        cfg.rot_r0 = to_double(e->value, e->line);
        if (!(*cfg.rot_r0 > 0.0)) fail(e->line, "rotational r0 must be > 0");
    }

    if (const Entry* e = tables.find("mms", "grids")) {
        for (double g : split_numbers(e->value, e->line)) {
            const int m = static_cast<int>(g);
            if (static_cast<double>(m) != g || m < 8) {
                fail(e->line, "mms grids must be integers of at least 8");
            }
            cfg.mms_grids.push_back(m);
        }
    }

    if (const Entry* e = tables.find("output", "directory")) {
        cfg.out_dir = e->value;
    }

    tables.check_consumed();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace kgraph
