#include "devstone/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace devstone {

namespace {

using nlohmann::json;

json model_to_json(const ModelTiming& m) {
    return json{
        {"type", to_string(m.config.type)},
        {"depth", m.config.depth},
        {"width", m.config.width},
        {"times_s", m.times_s},
        {"mean_s", m.mean_s},
        {"ci95_s", m.ci95_s},
        {"events", m.stats.lambda_calls},
        {"transitions",
         {{"int", m.stats.internal_transitions},
          {"ext", m.stats.external_transitions},
          {"con", m.stats.confluent_transitions}}},
        {"messages",
         {{"routed", m.stats.messages_routed}, {"discarded", m.stats.messages_discarded}}},
    };
}

ModelTiming model_from_json(const json& j) {
    ModelTiming m;
    const auto type = parse_type(j.at("type").get<std::string>());
    if (!type) throw std::runtime_error("report: unknown model type " + j.at("type").dump());
    m.config.type = *type;
    m.config.depth = j.at("depth").get<int>();
    m.config.width = j.at("width").get<int>();
    m.times_s = j.at("times_s").get<std::vector<double>>();
    m.mean_s = j.at("mean_s").get<double>();
    m.ci95_s = j.at("ci95_s").get<double>();
    m.stats.lambda_calls = j.at("events").get<std::uint64_t>();
    const json& tr = j.at("transitions");
    m.stats.internal_transitions = tr.at("int").get<std::uint64_t>();
    m.stats.external_transitions = tr.at("ext").get<std::uint64_t>();
    m.stats.confluent_transitions = tr.at("con").get<std::uint64_t>();
    const json& msg = j.at("messages");
    m.stats.messages_routed = msg.at("routed").get<std::uint64_t>();
    m.stats.messages_discarded = msg.at("discarded").get<std::uint64_t>();
    return m;
}

}  // namespace

std::string report_to_json(const MetricReport& r) {
    json j{
        {"machine",
         {{"hostname", r.machine.hostname},
          {"os", r.machine.os},
          {"cpu", r.machine.cpu},
          {"timestamp", r.machine.timestamp}}},
        {"engine", {{"name", r.engine_name}, {"version", r.engine_version}}},
        {"replications", r.replications},
        {"models", json::array()},
        {"total_mean_s", r.total_mean_s},
        {"devstones_per_minute", r.devstones_per_minute},
        {"devstones_ci95", r.devstones_ci95},
        {"ci_method", r.ci_method},
        {"breakdown_pct", r.breakdown_pct},
    };
    for (const ModelTiming& m : r.models) j["models"].push_back(model_to_json(m));
    return j.dump(2) + "\n";
}

MetricReport parse_report(const std::string& json_text) {
    const json j = json::parse(json_text);
    MetricReport r;
    const json& machine = j.at("machine");
    r.machine.hostname = machine.at("hostname").get<std::string>();
    r.machine.os = machine.at("os").get<std::string>();
    r.machine.cpu = machine.at("cpu").get<std::string>();
    r.machine.timestamp = machine.at("timestamp").get<std::string>();
    r.engine_name = j.at("engine").at("name").get<std::string>();
    r.engine_version = j.at("engine").at("version").get<std::string>();
    r.replications = j.at("replications").get<int>();
    for (const json& jm : j.at("models")) r.models.push_back(model_from_json(jm));
    r.total_mean_s = j.at("total_mean_s").get<double>();
    r.devstones_per_minute = j.at("devstones_per_minute").get<double>();
    r.devstones_ci95 = j.at("devstones_ci95").get<double>();
    r.ci_method = j.at("ci_method").get<std::string>();
    r.breakdown_pct = j.at("breakdown_pct").get<std::map<std::string, double>>();
    return r;
}

std::string report_to_csv(const MetricReport& r) {
    std::ostringstream out;
    out << "type,depth,width,replications,mean_s,ci95_s,events,"
           "int_transitions,ext_transitions,con_transitions,"
           "messages_routed,messages_discarded\n";
    out.precision(17);
    for (const ModelTiming& m : r.models) {
        out << to_string(m.config.type) << ',' << m.config.depth << ',' << m.config.width << ','
            << r.replications << ',' << m.mean_s << ',' << m.ci95_s << ','
            << m.stats.lambda_calls << ',' << m.stats.internal_transitions << ','
            << m.stats.external_transitions << ',' << m.stats.confluent_transitions << ','
            << m.stats.messages_routed << ',' << m.stats.messages_discarded << '\n';
    }
    out << "TOTAL,,," << r.replications << ',' << r.total_mean_s << ',' << r.devstones_ci95
        << ",,,,,,\n";
    out << "DEVSTONES_PER_MINUTE,,," << r.replications << ',' << r.devstones_per_minute << ','
        << r.devstones_ci95 << ",,,,,,\n";
    return out.str();
}

void write_report_file(const MetricReport& report, const std::string& path,
                       const std::string& format) {
    std::string body;
    if (format == "json") {
        body = report_to_json(report);
    } else if (format == "csv") {
        body = report_to_csv(report);
    } else {
        throw std::invalid_argument("unknown report format: " + format);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open report file: " + path);
    out << body;
    if (!out) throw std::runtime_error("failed writing report file: " + path);
}

}  // namespace devstone
