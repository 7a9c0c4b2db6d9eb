#include "csrap/config.hpp"

#include <json.hpp>

namespace csrap {

// JSON bindings used by the experiment config loader. Unknown keys are ignored;
// missing keys keep the defaults.
void from_json_into(const nlohmann::json& j, HorizonConfig& c) {
    c.horizon_len = j.value("length", c.horizon_len);
    c.frame_period = j.value("frame_period", c.frame_period);
    c.min_frequency = j.value("min_frequency", c.min_frequency);
    c.quantum = j.value("quantum", c.quantum);
}

void from_json_into(const nlohmann::json& j, ResourceModel& m) {
    m.budget = j.value("budget", m.budget);
    m.canvas_overhead = j.value("canvas_overhead", m.canvas_overhead);
    m.area_cost_rate = j.value("area_cost_rate", m.area_cost_rate);
    m.frame_volume = j.value("frame_volume", m.frame_volume);
    m.accel_capacity = j.value("accel_capacity", m.accel_capacity);
    m.batch_latency_slope = j.value("batch_latency_slope", m.batch_latency_slope);
    m.charge_full_inspection = j.value("charge_full_inspection", m.charge_full_inspection);
}

void from_json_into(const nlohmann::json& j, ResizePolicy& p) {
    if (j.contains("factors")) p.factors = j.at("factors").get<std::vector<double>>();
    p.acc_min = j.value("acc_min", p.acc_min);
    p.acc_max = j.value("acc_max", p.acc_max);
}

}  // namespace csrap
