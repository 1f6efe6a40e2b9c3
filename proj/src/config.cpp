#include "omstirap/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "omstirap/detail/format.hpp"
#include "omstirap/errors.hpp"

namespace omstirap {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_number(const std::string& key, std::string_view value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw SimError(errc::invalid_value,
                   key + ": '" + std::string(value) + "' is not a number");
  if (!std::isfinite(v))
    throw SimError(errc::invalid_value, key + ": value must be finite");
  return v;
}

double parse_nonnegative(const std::string& key, std::string_view value) {
  const double v = parse_number(key, value);
  if (v < 0.0)
    throw SimError(errc::invalid_value, key + ": value must be >= 0");
  return v;
}

double parse_positive(const std::string& key, std::string_view value) {
  const double v = parse_number(key, value);
  if (v <= 0.0)
    throw SimError(errc::invalid_value, key + ": value must be > 0");
  return v;
}

bool parse_bool(const std::string& key, std::string_view value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw SimError(errc::invalid_value, key + ": expected true or false");
}

struct KeyHandler {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

// Declaration order is the canonical serialization order.
const std::vector<std::pair<std::string, KeyHandler>>& key_table() {
  using detail::format_double;
  auto number = [](auto member) {
    return KeyHandler{
        [member](RunConfig& c, std::string_view v) {
          c.*member = parse_number("", v);
        },
        [member](const RunConfig& c) { return format_double(c.*member); }};
  };
  (void)number;

  static const std::vector<std::pair<std::string, KeyHandler>> table = [] {
    std::vector<std::pair<std::string, KeyHandler>> t;

    auto add_param = [&](const char* name, double SystemParams::* member,
                         double (*parse)(const std::string&, std::string_view)) {
      t.push_back({name,
                   {[member, parse, name](RunConfig& c, std::string_view v) {
                      c.params.*member = parse(name, v);
                    },
                    [member](const RunConfig& c) {
                      return detail::format_double(c.params.*member);
                    }}});
    };
    auto add_schedule = [&](const char* name, double PulseSchedule::* member,
                            double (*parse)(const std::string&, std::string_view)) {
      t.push_back({name,
                   {[member, parse, name](RunConfig& c, std::string_view v) {
                      c.schedule.*member = parse(name, v);
                    },
                    [member](const RunConfig& c) {
                      return detail::format_double(c.schedule.*member);
                    }}});
    };

    add_param("delta_L", &SystemParams::delta_L, parse_number);
    add_param("delta_M", &SystemParams::delta_M, parse_number);
    add_param("delta_R", &SystemParams::delta_R, parse_number);
    add_param("omega_m1", &SystemParams::omega_m1, parse_positive);
    add_param("omega_m2", &SystemParams::omega_m2, parse_positive);
    add_param("g1", &SystemParams::g1, parse_number);
    add_param("g2", &SystemParams::g2, parse_number);
    add_param("j1", &SystemParams::j1, parse_number);
    add_param("j2", &SystemParams::j2, parse_number);
    add_param("gamma_L", &SystemParams::gamma_L, parse_nonnegative);
    add_param("gamma_M", &SystemParams::gamma_M, parse_nonnegative);
    add_param("gamma_R", &SystemParams::gamma_R, parse_nonnegative);
    add_param("gamma_m1", &SystemParams::gamma_m1, parse_nonnegative);
    add_param("gamma_m2", &SystemParams::gamma_m2, parse_nonnegative);
    add_param("nbar1", &SystemParams::nbar1, parse_nonnegative);
    add_param("nbar2", &SystemParams::nbar2, parse_nonnegative);

    add_schedule("amplitude", &PulseSchedule::amplitude, parse_nonnegative);
    add_schedule("width", &PulseSchedule::width, parse_positive);
    add_schedule("half_delay", &PulseSchedule::half_delay, parse_number);
    add_schedule("t_start", &PulseSchedule::t_start, parse_number);
    add_schedule("t_end", &PulseSchedule::t_end, parse_number);

    t.push_back({"rel_tol",
                 {[](RunConfig& c, std::string_view v) {
                    c.rel_tol = parse_positive("rel_tol", v);
                  },
                  [](const RunConfig& c) { return detail::format_double(c.rel_tol); }}});
    t.push_back({"n_points",
                 {[](RunConfig& c, std::string_view v) {
                    const double d = parse_number("n_points", v);
                    const int n = static_cast<int>(d);
                    if (d != n || n < 2)
                      throw SimError(errc::invalid_value,
                                     "n_points: expected an integer >= 2");
                    c.n_points = n;
                  },
                  [](const RunConfig& c) { return std::to_string(c.n_points); }}});

    static const char* occ_keys[5] = {"init_n_aL", "init_n_aM", "init_n_aR",
                                      "init_n_b1", "init_n_b2"};
    for (std::size_t i = 0; i < 5; ++i) {
      t.push_back({occ_keys[i],
                   {[i](RunConfig& c, std::string_view v) {
                      c.initial_occupancy[i] = parse_nonnegative(occ_keys[i], v);
                    },
                    [i](const RunConfig& c) {
                      return detail::format_double(c.initial_occupancy[i]);
                    }}});
    }

    t.push_back({"out_dir",
                 {[](RunConfig& c, std::string_view v) {
                    if (v.empty())
                      throw SimError(errc::invalid_value,
                                     "out_dir: value must not be empty");
                    c.out_dir = std::string(v);
                  },
                  [](const RunConfig& c) { return c.out_dir; }}});
    t.push_back({"mean_field",
                 {[](RunConfig& c, std::string_view v) {
                    if (v == "quasistatic") c.mean_field = MeanFieldMode::quasi_static;
                    else if (v == "dynamic") c.mean_field = MeanFieldMode::dynamic;
                    else
                      throw SimError(errc::invalid_value,
                                     "mean_field: expected quasistatic or dynamic");
                  },
                  [](const RunConfig& c) {
                    return std::string(c.mean_field == MeanFieldMode::quasi_static
                                           ? "quasistatic"
                                           : "dynamic");
                  }}});
    t.push_back({"decay_shift",
                 {[](RunConfig& c, std::string_view v) {
                    if (v == "paper") c.decay_shift = ShiftConvention::paper;
                    else if (v == "normalized") c.decay_shift = ShiftConvention::normalized;
                    else
                      throw SimError(errc::invalid_value,
                                     "decay_shift: expected paper or normalized");
                  },
                  [](const RunConfig& c) {
                    return std::string(c.decay_shift == ShiftConvention::paper
                                           ? "paper"
                                           : "normalized");
                  }}});
    t.push_back({"strict",
                 {[](RunConfig& c, std::string_view v) {
                    c.strict = parse_bool("strict", v);
                  },
                  [](const RunConfig& c) {
                    return std::string(c.strict ? "true" : "false");
                  }}});
    return t;
  }();
  return table;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string> seen;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw SimError(errc::parse_error,
                     "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty())
      throw SimError(errc::parse_error,
                     "line " + std::to_string(line_no) + ": missing key");
    if (!seen.insert(key).second)
      throw SimError(errc::parse_error, "line " + std::to_string(line_no) +
                                            ": duplicate key '" + key + "'");

    const auto& table = key_table();
    const auto it =
        std::find_if(table.begin(), table.end(),
                     [&](const auto& entry) { return entry.first == key; });
    if (it == table.end())
      throw SimError(errc::unknown_key, "unknown key '" + key + "'");
    it->second.set(config, value);
  }

  if (config.schedule.t_start >= config.schedule.t_end)
    throw SimError(errc::invalid_value, "t_start: must be < t_end");
  return config;
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const auto& [key, handler] : key_table()) {
    out += key;
    out += " = ";
    out += handler.get(config);
    out += '\n';
  }
  return out;
}

}  // namespace omstirap
