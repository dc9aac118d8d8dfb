#include "bindlab/knowledge.hpp"

#include <algorithm>

namespace bindlab {

bool assumption_well_formed(const OriginationAssumption& a) {
  if (!a.subject.valid()) return false;
  switch (a.kind) {
    case AssumptionKind::NonOriginating:
      return a.subject.kind() == Kind::PrivKey || a.subject.kind() == Kind::DhExp ||
             a.subject.kind() == Kind::SymKey;
    case AssumptionKind::UniquelyOriginating:
    case AssumptionKind::UniquelyGenerated:
      return a.subject.kind() == Kind::Nonce || a.subject.kind() == Kind::Pms ||
             a.subject.kind() == Kind::DhExp;
    case AssumptionKind::PenetratorNonOriginating:
      return a.subject.is_atom();
  }
  return false;
}

void KnowledgeBase::assume(const OriginationAssumption& a) {
  if (!assumption_well_formed(a))
    throw ScenarioBroken("malformed origination assumption on " + a.subject.str());
  assumptions_.push_back(a);
  if (a.kind == AssumptionKind::NonOriginating) forbid(a.subject);
}

void KnowledgeBase::forbid(const Term& atom) {
  if (contains(atom))
    throw ScenarioBroken("non-origination declared for a term already known: " + atom.str());
  forbidden_.push_back(atom);
}

bool KnowledgeBase::insert(const Term& t, std::vector<Term>& work) {
  if (index_.count(t)) return false;
  for (const Term& f : forbidden_)
    if (f == t) throw ScenarioBroken("non-originating term entered the knowledge base: " + t.str());
  index_.insert(t);
  items_.push_back(t);
  work.push_back(t);
  return true;
}

bool KnowledgeBase::key_openable(const Term& key) const {
  if (key.kind() == Kind::PubKey) return contains(privk(key.text()));
  return derivable(key);
}

bool KnowledgeBase::add(const Term& t) {
  if (!t.valid()) throw ScenarioBroken("invalid term added to knowledge base");
  std::vector<Term> work;
  bool fresh = insert(t, work);
  if (!fresh) return false;
  close(work);
  return true;
}

void KnowledgeBase::close(std::vector<Term>& work) {
  while (true) {
    while (!work.empty()) {
      Term cur = work.back();
      work.pop_back();
      switch (cur.kind()) {
        case Kind::Tuple:
          for (const Term& p : cur.parts()) insert(p, work);
          break;
        case Kind::Sig:
          insert(cur.part(1), work);
          break;
        case Kind::SymKey:
          insert(cur.part(0), work);
          break;
        case Kind::SymEnc:
        case Kind::AsymEnc:
          if (key_openable(cur.part(0)))
            insert(cur.part(1), work);
          else
            pending_enc_.push_back(cur);
          break;
        case Kind::DhExp:
          for (std::size_t i = 0, n = items_.size(); i < n; ++i)
            if (items_[i].kind() == Kind::DhPub && items_[i].part(0) != cur)
              insert(dh_shared(cur, items_[i].part(0)), work);
          break;
        case Kind::DhPub:
          for (std::size_t i = 0, n = items_.size(); i < n; ++i)
            if (items_[i].kind() == Kind::DhExp && items_[i] != cur.part(0))
              insert(dh_shared(items_[i], cur.part(0)), work);
          break;
        default:
          break;
      }
    }
    // Newly learned material may unlock ciphertexts stored before their key
    // became derivable; retry until nothing more opens.
    bool opened = false;
    std::vector<Term> still_locked;
    for (const Term& enc : pending_enc_) {
      if (key_openable(enc.part(0))) {
        opened |= insert(enc.part(1), work);
      } else {
        still_locked.push_back(enc);
      }
    }
    pending_enc_ = std::move(still_locked);
    if (!opened && work.empty()) break;
  }
}

void KnowledgeBase::saturate() {
  // add() keeps the set closed after every insertion; running the fixed-point
  // loop with an empty worklist just retries any still-locked ciphertexts.
  std::vector<Term> work;
  close(work);
}

namespace {

enum class Mark : std::uint8_t { InProgress, Yes, No };

}  // namespace

bool KnowledgeBase::derivable(const Term& target) const {
  std::unordered_map<Term, Mark, TermHash> memo;

  auto rec = [&](auto&& self, const Term& t) -> bool {
    if (index_.count(t)) return true;
    if (t.kind() == Kind::Tag || t.kind() == Kind::Name) return true;
    auto it = memo.find(t);
    if (it != memo.end()) return it->second == Mark::Yes;
    memo[t] = Mark::InProgress;
    bool ok = false;
    switch (t.kind()) {
      case Kind::Tuple:
      case Kind::Hash: {
        ok = true;
        for (const Term& p : t.parts())
          if (!self(self, p)) {
            ok = false;
            break;
          }
        break;
      }
      case Kind::SymEnc:
      case Kind::AsymEnc:
      case Kind::Sig:
        ok = self(self, t.part(0)) && self(self, t.part(1));
        break;
      case Kind::DhPub:
        ok = self(self, t.part(0));
        break;
      case Kind::SymKey:
        ok = self(self, t.part(0));
        break;
      case Kind::DhShared: {
        const Term& a = t.part(0);
        const Term& b = t.part(1);
        ok = (self(self, a) && self(self, dh_pub(b))) ||
             (self(self, b) && self(self, dh_pub(a)));
        break;
      }
      default:
        ok = false;  // atoms must be possessed
        break;
    }
    memo[t] = ok ? Mark::Yes : Mark::No;
    return ok;
  };
  return rec(rec, target);
}

std::shared_ptr<Derivation> KnowledgeBase::derive_proof(const Term& target) const {
  using R = Derivation::Rule;
  auto leaf = [](R r, const Term& t) {
    return std::make_shared<Derivation>(Derivation{r, t, {}});
  };

  auto rec = [&](auto&& self, const Term& t) -> std::shared_ptr<Derivation> {
    if (index_.count(t)) return leaf(R::InKb, t);
    if (t.kind() == Kind::Tag || t.kind() == Kind::Name) return leaf(R::Public, t);
    auto node = [&](R r, std::vector<std::shared_ptr<Derivation>> prem) {
      return std::make_shared<Derivation>(Derivation{r, t, std::move(prem)});
    };
    switch (t.kind()) {
      case Kind::Tuple:
      case Kind::Hash: {
        std::vector<std::shared_ptr<Derivation>> prem;
        for (const Term& p : t.parts()) {
          auto d = self(self, p);
          if (!d) return nullptr;
          prem.push_back(std::move(d));
        }
        return node(t.kind() == Kind::Tuple ? R::Pair : R::HashRule, std::move(prem));
      }
      case Kind::SymEnc:
      case Kind::AsymEnc:
      case Kind::Sig: {
        auto k = self(self, t.part(0));
        auto p = k ? self(self, t.part(1)) : nullptr;
        if (!k || !p) return nullptr;
        return node(t.kind() == Kind::Sig ? R::SignRule : R::Enc, {std::move(k), std::move(p)});
      }
      case Kind::DhPub: {
        auto e = self(self, t.part(0));
        return e ? node(R::PubHalf, {std::move(e)}) : nullptr;
      }
      case Kind::SymKey: {
        auto d = self(self, t.part(0));
        return d ? node(R::KeyWrap, {std::move(d)}) : nullptr;
      }
      case Kind::DhShared: {
        const Term& a = t.part(0);
        const Term& b = t.part(1);
        if (auto ea = self(self, a)) {
          if (auto pb = self(self, dh_pub(b)))
            return node(R::DhCombine, {std::move(ea), std::move(pb)});
        }
        if (auto eb = self(self, b)) {
          if (auto pa = self(self, dh_pub(a)))
            return node(R::DhCombine, {std::move(eb), std::move(pa)});
        }
        return nullptr;
      }
      default:
        return nullptr;
    }
  };
  if (!derivable(target)) return nullptr;
  return rec(rec, target);
}

std::uint64_t KnowledgeBase::fingerprint() const {
  std::uint64_t x = 0, s = 0x9e3779b97f4a7c15ULL;
  for (const Term& t : items_) {
    std::uint64_t h = static_cast<std::uint64_t>(t.hash());
    x ^= h;
    s += h * 0x100000001b3ULL;
  }
  return x ^ (s + (static_cast<std::uint64_t>(items_.size()) << 32));
}

}  // namespace bindlab
