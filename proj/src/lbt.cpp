#include "hapsim/coex/lbt.hpp"

#include "hapsim/error.hpp"

namespace hapsim::coex {
namespace {

int cca_slots(const LbtParams& params, Micros slot) {
  return static_cast<int>((params.cca + slot - 1) / slot);
}

void draw_counter(LbtNode& node, const LbtParams& params) {
  node.state = LbtState::Backoff;
  node.counter = static_cast<int>(node.rng.uniform_int(static_cast<std::uint64_t>(params.contention_window)));
}

}  // namespace

void LbtParams::validate() const {
  if (cca < 0) throw ConfigError("lbt.cca_us must be >= 0");
  if (contention_window < 1) throw ConfigError("lbt.contention_window must be >= 1");
  if (burst <= 0) throw ConfigError("lbt.burst_us must be > 0");
  if (burst_subframes < 0) throw ConfigError("lbt.burst_subframes must be >= 0");
  if (duty_off && *duty_off < 0) throw ConfigError("lbt.duty_off_us must be >= 0");
}

Micros resolve_duty_off(const LbtParams& params, int m_lte, int n_wifi) {
  if (params.duty_off) return *params.duty_off;
  return params.burst * (m_lte + n_wifi - 1);
}

std::string_view to_string(LbtState state) {
  switch (state) {
    case LbtState::Sensing: return "sensing";
    case LbtState::Backoff: return "backoff";
    case LbtState::Transmitting: return "transmitting";
    case LbtState::Deferring: return "deferring";
  }
  return "unknown";
}

LbtNode make_lbt_node(std::uint32_t id, const LbtParams& params, Micros duty_off, Micros slot,
                      sim::RngStream rng) {
  LbtNode node;
  node.id = id;
  node.duty_off = duty_off;
  node.rng = rng;
  lbt_wake(node, params, slot);
  return node;
}

void lbt_idle_slot(LbtNode& node, const LbtParams& params) {
  if (node.state == LbtState::Sensing) {
    if (node.cca_slots_left > 0) --node.cca_slots_left;
    if (node.cca_slots_left == 0) draw_counter(node, params);
  } else if (node.state == LbtState::Backoff && node.counter > 0) {
    --node.counter;
  }
}

void lbt_busy_slot(LbtNode& node) {
  if (node.state == LbtState::Backoff && node.counter > 0) --node.counter;
}

void lbt_medium_released(LbtNode& node, const LbtParams& params) {
  if (node.state == LbtState::Sensing) draw_counter(node, params);
}

void lbt_start_burst(LbtNode& node) { node.state = LbtState::Transmitting; }

void lbt_finish_burst(LbtNode& node) { node.state = LbtState::Deferring; }

void lbt_wake(LbtNode& node, const LbtParams& params, Micros slot) {
  node.state = LbtState::Sensing;
  node.cca_slots_left = cca_slots(params, slot);
  if (node.cca_slots_left == 0) draw_counter(node, params);
}

LbtDecision lbt_contend(LbtNode& node, wifi::MediumState medium, const LbtParams& params) {
  if (medium == wifi::MediumState::Busy) return LbtDecision::Wait;
  if (lbt_ready(node)) return LbtDecision::Transmit;
  lbt_idle_slot(node, params);
  return LbtDecision::Wait;
}

}  // namespace hapsim::coex
