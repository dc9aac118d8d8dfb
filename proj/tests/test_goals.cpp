#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "bindlab/goals.hpp"
#include "bindlab/term.hpp"

using namespace bindlab;

namespace {

const ModelId kDhModel{BindingMethod::ServerEndpoint, TlsVariant::Tls12Dh, false};

using Binds = std::vector<std::pair<std::string, std::pair<Term, int>>>;

StrandInfo mk(int id, RoleKind role, int height, int target, const Binds& binds,
              bool assumptions = true) {
  StrandInfo s;
  s.id = id;
  s.role = role;
  s.agent = role_is_client(role) ? "client" : "server";
  s.height = height;
  s.target_height = target;
  s.assumptions_hold = assumptions;
  for (const auto& [var, vb] : binds) s.vars[var] = {vb.first, vb.second};
  return s;
}

// Full registration context over the DH shapes, bound early on both sides.
Binds reg_ctx(const Term& cr, const Term& sr, const Term& ch, const Term& user) {
  return {
      {"server", {name("server"), 0}}, {"ca", {name("ca"), 0}},
      {"cr", {cr, 1}},                 {"sr", {sr, 2}},
      {"x", {dh_exp("x1"), 1}},        {"y", {dh_exp("y1"), 2}},
      {"challenge", {ch, 3}},          {"username", {user, 3}},
      {"appid", {name("server"), 3}},
  };
}

}  // namespace

TEST_CASE("role relations") {
  CHECK(complementary_role(RoleKind::ClientReg) == RoleKind::ServerReg);
  CHECK(complementary_role(complementary_role(RoleKind::ServerAuth)) == RoleKind::ServerAuth);
  CHECK(client_role(Flow::Authentication) == RoleKind::ClientAuth);
  CHECK(server_role(Flow::Baseline) == RoleKind::ServerBase);
  CHECK(role_flow(RoleKind::ServerReg) == Flow::Registration);
  CHECK(role_is_client(RoleKind::ClientBase));
  CHECK_FALSE(role_is_client(RoleKind::ServerAuth));
}

TEST_CASE("strand heights depend on the key exchange shape") {
  CHECK(full_height(RoleKind::ClientReg, TlsVariant::Tls12Dh) == 4);
  CHECK(full_height(RoleKind::ServerAuth, TlsVariant::Tls13) == 4);
  CHECK(full_height(RoleKind::ClientReg, TlsVariant::Tls12Rsa) == 5);
  CHECK(full_height(RoleKind::ServerBase, TlsVariant::Tls12Rsa) == 5);
  CHECK(full_height(RoleKind::Adversary, TlsVariant::Tls12Rsa) == 0);
}

TEST_CASE("context variable sets") {
  auto rsa_reg = context_vars(CtxId::RegistrationCtx, TlsVariant::Tls12Rsa);
  auto dh_auth = context_vars(CtxId::AuthenticationCtx, TlsVariant::Tls12Dh);
  CHECK(std::count(rsa_reg.begin(), rsa_reg.end(), "pms") == 1);
  CHECK(std::count(rsa_reg.begin(), rsa_reg.end(), "x") == 0);
  CHECK(std::count(dh_auth.begin(), dh_auth.end(), "x") == 1);
  CHECK(std::count(dh_auth.begin(), dh_auth.end(), "username") == 0);
  auto base = context_vars(CtxId::BaselineCtx, TlsVariant::Tls12Rsa);
  CHECK(std::count(base.begin(), base.end(), "pw") == 1);
}

TEST_CASE("var_at respects binding heights") {
  StrandInfo s = mk(1, RoleKind::ClientReg, 4, 4, {{"late", {nonce("v"), 4}}});
  CHECK_FALSE(s.var_at("late", 3));
  CHECK(s.var_at("late", 4));
  CHECK(*s.var_at("late", 4) == nonce("v"));
  CHECK_FALSE(s.var_at("absent", 4));
}

TEST_CASE("goal is vacuously true without a completed perspective strand") {
  Bundle b;
  b.model = kDhModel;
  std::string why;
  CHECK(goal1(b, RoleKind::ClientReg, kDhModel, &why));
  CHECK(why.find("vacuous") != std::string::npos);

  b.strands.push_back(mk(1, RoleKind::ClientReg, 2, 4, reg_ctx(nonce("cr"), nonce("sr"),
                                                               nonce("ch"), name("u"))));
  CHECK(goal1(b, RoleKind::ClientReg, kDhModel));  // still running
}

TEST_CASE("matching contexts satisfy both perspectives") {
  Bundle b;
  b.model = kDhModel;
  Binds ctx = reg_ctx(nonce("cr"), nonce("sr"), nonce("ch"), name("u"));
  b.strands.push_back(mk(1, RoleKind::ClientReg, 4, 4, ctx));
  b.strands.push_back(mk(2, RoleKind::ServerReg, 4, 4, ctx));
  std::string why;
  CHECK(goal1(b, RoleKind::ClientReg, kDhModel, &why));
  CHECK(goal1(b, RoleKind::ServerReg, kDhModel));
}

TEST_CASE("a single disagreeing variable violates the goal") {
  Bundle b;
  b.model = kDhModel;
  b.strands.push_back(
      mk(1, RoleKind::ClientReg, 4, 4, reg_ctx(nonce("cr"), nonce("sr-a"), nonce("ch"), name("u"))));
  b.strands.push_back(
      mk(2, RoleKind::ServerReg, 4, 4, reg_ctx(nonce("cr"), nonce("sr-b"), nonce("ch"), name("u"))));
  std::string why;
  CHECK_FALSE(goal1(b, RoleKind::ServerReg, kDhModel, &why));
  CHECK(why.find("no agreeing partner") != std::string::npos);
  CHECK_FALSE(goal1(b, RoleKind::ClientReg, kDhModel));
}

TEST_CASE("a partner must have every context variable bound") {
  Bundle b;
  b.model = kDhModel;
  Binds full = reg_ctx(nonce("cr"), nonce("sr"), nonce("ch"), name("u"));
  Binds partial = full;
  partial.erase(partial.begin());  // drop the server binding
  b.strands.push_back(mk(1, RoleKind::ServerReg, 4, 4, full));
  b.strands.push_back(mk(2, RoleKind::ClientReg, 4, 4, partial));
  CHECK_FALSE(goal1(b, RoleKind::ServerReg, kDhModel));
}

TEST_CASE("duplicate agreeing partners break uniqueness") {
  Bundle b;
  b.model = kDhModel;
  Binds ctx = reg_ctx(nonce("cr"), nonce("sr"), nonce("ch"), name("u"));
  b.strands.push_back(mk(1, RoleKind::ServerReg, 4, 4, ctx));
  b.strands.push_back(mk(2, RoleKind::ClientReg, 4, 4, ctx));
  b.strands.push_back(mk(3, RoleKind::ClientReg, 4, 4, ctx));
  auto vars = context_vars(CtxId::RegistrationCtx, TlsVariant::Tls12Dh);
  CHECK(successful_completion(b, RoleKind::ServerReg, RoleKind::ClientReg, vars, 4, 4));
  CHECK_FALSE(unique_completion(b, RoleKind::ServerReg, RoleKind::ClientReg, vars, 4, 4));
  CHECK_FALSE(goal1(b, RoleKind::ServerReg, kDhModel));
}

TEST_CASE("broken-assumption strands are not judged but may be partners") {
  Bundle b;
  b.model = kDhModel;
  Binds ctx = reg_ctx(nonce("cr"), nonce("sr"), nonce("ch"), name("u"));
  // the only client chose an adversarial peer: not judged from its own side
  b.strands.push_back(mk(1, RoleKind::ClientReg, 4, 4, ctx, /*assumptions=*/false));
  std::string why;
  CHECK(goal1(b, RoleKind::ClientReg, kDhModel, &why));
  CHECK(why.find("vacuous") != std::string::npos);
  // but it still counts as the server's agreeing partner
  b.strands.push_back(mk(2, RoleKind::ServerReg, 4, 4, ctx));
  CHECK(goal1(b, RoleKind::ServerReg, kDhModel));
}

TEST_CASE("rejected strands are neither judged nor complete") {
  StrandInfo s = mk(1, RoleKind::ServerReg, 4, 4, {});
  s.status = StrandStatus::Rejected;
  CHECK_FALSE(s.completed());
  CHECK_FALSE(judgeable(s, RoleKind::ServerReg, 4));
}

TEST_CASE("partner heights matter: agreement only counts up to height j") {
  Bundle b;
  b.model = kDhModel;
  Binds server_ctx = reg_ctx(nonce("cr"), nonce("sr"), nonce("ch"), name("u"));
  b.strands.push_back(mk(1, RoleKind::ServerReg, 4, 4, server_ctx));
  // client bound the challenge only at its final height
  Binds late = reg_ctx(nonce("cr"), nonce("sr"), nonce("ch"), name("u"));
  for (auto& [var, vb] : late)
    if (var == "challenge") vb.second = 4;
  b.strands.push_back(mk(2, RoleKind::ClientReg, 4, 4, late));
  auto vars = context_vars(CtxId::RegistrationCtx, TlsVariant::Tls12Dh);
  CHECK_FALSE(successful_completion(b, RoleKind::ServerReg, RoleKind::ClientReg, vars, 4, 3));
  CHECK(successful_completion(b, RoleKind::ServerReg, RoleKind::ClientReg, vars, 4, 4));
  CHECK(goal1(b, RoleKind::ServerReg, kDhModel));  // some j works
}
