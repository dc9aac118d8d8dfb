#include "bindlab/goals.hpp"

#include <algorithm>
#include <sstream>

namespace bindlab {

const char* flow_name(Flow f) {
  switch (f) {
    case Flow::Baseline: return "baseline";
    case Flow::Registration: return "registration";
    case Flow::Authentication: return "authentication";
  }
  return "?";
}

const char* role_name(RoleKind r) {
  switch (r) {
    case RoleKind::ClientBase: return "client-base";
    case RoleKind::ServerBase: return "server-base";
    case RoleKind::ClientReg: return "client-reg";
    case RoleKind::ServerReg: return "server-reg";
    case RoleKind::ClientAuth: return "client-auth";
    case RoleKind::ServerAuth: return "server-auth";
    case RoleKind::Adversary: return "adversary";
  }
  return "?";
}

bool role_is_client(RoleKind r) {
  return r == RoleKind::ClientBase || r == RoleKind::ClientReg || r == RoleKind::ClientAuth;
}

RoleKind complementary_role(RoleKind r) {
  switch (r) {
    case RoleKind::ClientBase: return RoleKind::ServerBase;
    case RoleKind::ServerBase: return RoleKind::ClientBase;
    case RoleKind::ClientReg: return RoleKind::ServerReg;
    case RoleKind::ServerReg: return RoleKind::ClientReg;
    case RoleKind::ClientAuth: return RoleKind::ServerAuth;
    case RoleKind::ServerAuth: return RoleKind::ClientAuth;
    case RoleKind::Adversary: return RoleKind::Adversary;
  }
  return RoleKind::Adversary;
}

RoleKind client_role(Flow f) {
  switch (f) {
    case Flow::Baseline: return RoleKind::ClientBase;
    case Flow::Registration: return RoleKind::ClientReg;
    case Flow::Authentication: return RoleKind::ClientAuth;
  }
  return RoleKind::Adversary;
}

RoleKind server_role(Flow f) { return complementary_role(client_role(f)); }

Flow role_flow(RoleKind r) {
  switch (r) {
    case RoleKind::ClientBase:
    case RoleKind::ServerBase: return Flow::Baseline;
    case RoleKind::ClientReg:
    case RoleKind::ServerReg: return Flow::Registration;
    default: return Flow::Authentication;
  }
}

int full_height(RoleKind r, TlsVariant v) {
  if (r == RoleKind::Adversary) return 0;
  // TLS events: RSA = hello, hello, key exchange; DH folds the key exchange
  // into the hellos. Every flow then has one request and one response.
  int tls_events = tls_is_dh(v) ? 2 : 3;
  return tls_events + 2;
}

std::optional<Term> StrandInfo::var_at(const std::string& name, int max_height) const {
  auto it = vars.find(name);
  if (it == vars.end()) return std::nullopt;
  if (it->second.at_height > max_height) return std::nullopt;
  return it->second.value;
}

const StrandInfo* Bundle::strand(int id) const {
  for (const StrandInfo& s : strands)
    if (s.id == id) return &s;
  return nullptr;
}

const char* ctx_name(CtxId c) {
  switch (c) {
    case CtxId::TlsRsaCtx: return "TlsRsaCtx";
    case CtxId::TlsDhCtx: return "TlsDhCtx";
    case CtxId::BaselineCtx: return "BaselineCtx";
    case CtxId::RegistrationCtx: return "RegistrationCtx";
    case CtxId::AuthenticationCtx: return "AuthenticationCtx";
  }
  return "?";
}

std::vector<std::string> context_vars(CtxId c, TlsVariant v) {
  std::vector<std::string> base;
  if (c == CtxId::TlsRsaCtx || (c != CtxId::TlsDhCtx && !tls_is_dh(v)))
    base = {"server", "ca", "cr", "sr", "pms"};
  else
    base = {"server", "ca", "cr", "sr", "x", "y"};
  switch (c) {
    case CtxId::TlsRsaCtx:
    case CtxId::TlsDhCtx:
      return base;
    case CtxId::BaselineCtx:
      base.push_back("username");
      base.push_back("pw");
      return base;
    case CtxId::RegistrationCtx:
      base.push_back("challenge");
      base.push_back("username");
      base.push_back("appid");
      return base;
    case CtxId::AuthenticationCtx:
      base.push_back("challenge");
      base.push_back("appid");
      return base;
  }
  return base;
}

CtxId context_for(Flow f) {
  switch (f) {
    case Flow::Baseline: return CtxId::BaselineCtx;
    case Flow::Registration: return CtxId::RegistrationCtx;
    case Flow::Authentication: return CtxId::AuthenticationCtx;
  }
  return CtxId::BaselineCtx;
}

bool judgeable(const StrandInfo& s, RoleKind perspective, int min_height) {
  if (s.role != perspective || s.adversary()) return false;
  if (s.status == StrandStatus::Rejected) return false;
  if (s.height < min_height) return false;
  if (role_is_client(perspective) && !s.assumptions_hold) return false;
  return true;
}

namespace {

bool agree(const StrandInfo& a, const StrandInfo& b, const std::vector<std::string>& ctx,
           int i, int j) {
  for (const std::string& v : ctx) {
    auto va = a.var_at(v, i);
    auto vb = b.var_at(v, j);
    if (!va || !vb || *va != *vb) return false;
  }
  return true;
}

std::vector<const StrandInfo*> partners(const Bundle& bd, const StrandInfo& a, RoleKind role_b,
                                        const std::vector<std::string>& ctx, int i, int j) {
  std::vector<const StrandInfo*> out;
  for (const StrandInfo& b : bd.strands) {
    if (b.role != role_b || b.adversary() || b.id == a.id) continue;
    if (b.height < j) continue;
    if (agree(a, b, ctx, i, j)) out.push_back(&b);
  }
  return out;
}

}  // namespace

bool successful_completion(const Bundle& b, RoleKind role_a, RoleKind role_b,
                           const std::vector<std::string>& ctx, int i, int j) {
  for (const StrandInfo& s : b.strands) {
    if (!judgeable(s, role_a, i)) continue;
    if (partners(b, s, role_b, ctx, i, j).empty()) return false;
  }
  return true;
}

bool unique_completion(const Bundle& b, RoleKind role_a, RoleKind role_b,
                       const std::vector<std::string>& ctx, int i, int j) {
  for (const StrandInfo& s : b.strands) {
    if (!judgeable(s, role_a, i)) continue;
    if (partners(b, s, role_b, ctx, i, j).size() > 1) return false;
  }
  return true;
}

bool goal1(const Bundle& b, RoleKind perspective, const ModelId& model, std::string* why) {
  RoleKind comp = complementary_role(perspective);
  Flow flow = role_flow(perspective);
  std::vector<std::string> ctx = context_vars(context_for(flow), model.tls);
  int i = full_height(perspective, model.tls);
  int max_j = full_height(comp, model.tls);

  bool any_judged = false;
  for (const StrandInfo& s : b.strands) any_judged |= judgeable(s, perspective, i);
  if (!any_judged) {
    if (why) *why = "no completed perspective strand; vacuously satisfied";
    return true;
  }

  for (int j = 1; j <= max_j; ++j) {
    if (successful_completion(b, perspective, comp, ctx, i, j) &&
        unique_completion(b, perspective, comp, ctx, i, j)) {
      if (why) {
        std::ostringstream os;
        os << "agreement on " << ctx_name(context_for(flow)) << " at partner height " << j;
        *why = os.str();
      }
      return true;
    }
  }
  if (why) {
    std::ostringstream os;
    os << "no partner height j gives successful and unique completion on "
       << ctx_name(context_for(flow));
    for (const StrandInfo& s : b.strands) {
      if (!judgeable(s, perspective, i)) continue;
      if (partners(b, s, comp, ctx, i, max_j).empty())
        os << "; strand " << s.id << " (" << role_name(s.role) << ") has no agreeing partner";
    }
    *why = os.str();
  }
  return false;
}

}  // namespace bindlab
