#include "pfsim/tables.hpp"

#include <stdexcept>

namespace pfsim {

namespace {

Resolution make_resolution(Resolution::Kind kind, Resolution::Cause cause,
                           const BlockAddr& block, const FeatureVector& x) {
  Resolution r;
  r.kind = kind;
  r.cause = cause;
  r.block = block;
  r.features = x;
  switch (kind) {
    case Resolution::Kind::CorrectAccept:
      r.desired = +1;
      r.real = +1;
      break;
    case Resolution::Kind::WrongAccept:
      r.desired = -1;
      r.real = +1;
      break;
    case Resolution::Kind::WrongDeny:
      r.desired = +1;
      r.real = -1;
      break;
    case Resolution::Kind::CorrectDeny:
      r.desired = -1;
      r.real = -1;
      break;
  }
  return r;
}

}  // namespace

DecisionTables::DecisionTables(const TableConfig& cfg) : cfg_(cfg) {
  if (cfg_.accept_capacity == 0 || cfg_.deny_capacity == 0 ||
      cfg_.accept_window == 0 || cfg_.deny_window == 0) {
    throw std::invalid_argument("table capacities and windows must be > 0");
  }
}

void DecisionTables::record_accept(BlockAddr block, const FeatureVector& x,
                                   std::vector<Resolution>& out) {
  if (accept_.size() == cfg_.accept_capacity) {
    const Entry& oldest = accept_.front();
    out.push_back(make_resolution(Resolution::Kind::WrongAccept,
                                  Resolution::Cause::Evict, oldest.block,
                                  oldest.features));
    ++stats_.accepts_resolved;
    accept_.pop_front();
  }
  accept_.push_back({block, x, 0});
  ++stats_.accepts_recorded;
}

void DecisionTables::record_deny(BlockAddr block, const FeatureVector& x,
                                 std::vector<Resolution>& out) {
  if (deny_.size() == cfg_.deny_capacity) {
    const Entry& oldest = deny_.front();
    out.push_back(make_resolution(Resolution::Kind::CorrectDeny,
                                  Resolution::Cause::Evict, oldest.block,
                                  oldest.features));
    ++stats_.denies_resolved;
    deny_.pop_front();
  }
  deny_.push_back({block, x, 0});
  ++stats_.denies_recorded;
}

void DecisionTables::on_demand_access(BlockAddr block,
                                      std::vector<Resolution>& out) {
  for (auto it = accept_.begin(); it != accept_.end();) {
    ++it->duration;
    if (it->block == block) {
      out.push_back(make_resolution(Resolution::Kind::CorrectAccept,
                                    Resolution::Cause::Touch, it->block,
                                    it->features));
      ++stats_.accepts_resolved;
      it = accept_.erase(it);
    } else if (it->duration >= cfg_.accept_window) {
      out.push_back(make_resolution(Resolution::Kind::WrongAccept,
                                    Resolution::Cause::Timeout, it->block,
                                    it->features));
      ++stats_.accepts_resolved;
      it = accept_.erase(it);
    } else {
      ++it;
    }
  }
}

void DecisionTables::on_cache_miss(BlockAddr block,
                                   std::vector<Resolution>& out) {
  for (auto it = deny_.begin(); it != deny_.end();) {
    ++it->duration;
    if (it->block == block) {
      out.push_back(make_resolution(Resolution::Kind::WrongDeny,
                                    Resolution::Cause::Touch, it->block,
                                    it->features));
      ++stats_.denies_resolved;
      it = deny_.erase(it);
    } else if (it->duration >= cfg_.deny_window) {
      out.push_back(make_resolution(Resolution::Kind::CorrectDeny,
                                    Resolution::Cause::Timeout, it->block,
                                    it->features));
      ++stats_.denies_resolved;
      it = deny_.erase(it);
    } else {
      ++it;
    }
  }
}

void DecisionTables::flush(std::vector<Resolution>& out) {
  for (const Entry& e : accept_) {
    out.push_back(make_resolution(Resolution::Kind::WrongAccept,
                                  Resolution::Cause::Flush, e.block,
                                  e.features));
    ++stats_.accepts_resolved;
  }
  accept_.clear();
  for (const Entry& e : deny_) {
    out.push_back(make_resolution(Resolution::Kind::CorrectDeny,
                                  Resolution::Cause::Flush, e.block,
                                  e.features));
    ++stats_.denies_resolved;
  }
  deny_.clear();
}

}  // namespace pfsim
