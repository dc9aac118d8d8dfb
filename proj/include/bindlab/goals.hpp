#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bindlab/term.hpp"
#include "bindlab/uaf.hpp"

namespace bindlab {

enum class Flow : std::uint8_t { Baseline, Registration, Authentication };
const char* flow_name(Flow f);

enum class RoleKind : std::uint8_t {
  ClientBase,
  ServerBase,
  ClientReg,
  ServerReg,
  ClientAuth,
  ServerAuth,
  Adversary,
};

const char* role_name(RoleKind r);
bool role_is_client(RoleKind r);
RoleKind complementary_role(RoleKind r);
RoleKind client_role(Flow f);
RoleKind server_role(Flow f);
Flow role_flow(RoleKind r);

// Events counted toward strand height: the full trace including the TLS
// exchange, so heights depend on the key-exchange shape.
int full_height(RoleKind r, TlsVariant v);

enum class Direction : std::uint8_t { Send, Recv };
enum class StrandStatus : std::uint8_t { Running, Completed, Rejected };

struct VarBinding {
  Term value;
  int at_height;  // height at which the strand bound this variable
};

struct StrandInfo {
  int id = 0;
  RoleKind role = RoleKind::Adversary;
  std::string agent;
  int height = 0;
  int target_height = 0;
  StrandStatus status = StrandStatus::Running;
  RejectReason reject = RejectReason::None;
  // False when the strand's own origination assumptions do not hold in this
  // bundle (it chose an adversary-controlled peer, or its secret material was
  // deliberately compromised); such strands are never judged as client
  // perspectives, though they may still serve as partner candidates.
  bool assumptions_hold = true;
  std::map<std::string, VarBinding> vars;

  bool adversary() const { return role == RoleKind::Adversary; }
  bool completed() const {
    return status != StrandStatus::Rejected && height >= target_height && target_height > 0;
  }
  std::optional<Term> var_at(const std::string& name, int max_height) const;
};

struct TraceEvent {
  int strand = -1;
  Direction dir = Direction::Send;
  Term term;
  int height_after = 0;
  int from_event = -1;  // recv only: index of the originating send, -1 = adversary synthesis
  std::string note;     // human annotation for trace output
};

struct Bundle {
  ModelId model{};
  Policy policy = Policy::Strict;
  std::vector<StrandInfo> strands;
  std::vector<TraceEvent> events;
  std::vector<std::uint64_t> kb_marks;  // adversary kb fingerprint after each event

  const StrandInfo* strand(int id) const;
};

// Session contexts: the variable sets two complementary strands must agree
// on. The TLS part depends on the key exchange; application contexts extend
// the TLS context of the model in use.
enum class CtxId : std::uint8_t { TlsRsaCtx, TlsDhCtx, BaselineCtx, RegistrationCtx, AuthenticationCtx };

const char* ctx_name(CtxId c);
std::vector<std::string> context_vars(CtxId c, TlsVariant v);
CtxId context_for(Flow f);

// Which strands a perspective may judge: client perspectives require the
// strand's own origination assumptions to hold (assumptions_hold).
bool judgeable(const StrandInfo& s, RoleKind perspective, int min_height);

bool successful_completion(const Bundle& b, RoleKind role_a, RoleKind role_b,
                           const std::vector<std::string>& ctx, int i, int j);
bool unique_completion(const Bundle& b, RoleKind role_a, RoleKind role_b,
                       const std::vector<std::string>& ctx, int i, int j);

// Session context agreement for one (model, perspective) cell judged over a
// recorded bundle: there is a partner height j at which every completed
// perspective strand has exactly one agreeing complementary partner.
bool goal1(const Bundle& b, RoleKind perspective, const ModelId& model,
           std::string* why = nullptr);

enum class VerdictStatus : std::uint8_t { Satisfied, Violated, BoundsExceeded };

struct Verdict {
  VerdictStatus status = VerdictStatus::Satisfied;
  ModelId model{};
  RoleKind perspective = RoleKind::Adversary;
  std::string witness_scenario;  // which scenario or search produced the witness
  std::optional<Bundle> witness;
};

}  // namespace bindlab
