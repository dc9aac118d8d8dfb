#pragma once

// Reference adversary-derivability oracle, independent of KnowledgeBase:
// a fixed-point marking pass over an explicit finite term universe instead
// of incremental saturation plus goal-directed composition.  Used to check
// the production engine exhaustively on small knowledge bases.

#include <cstddef>
#include <map>
#include <vector>

#include "bindlab/term.hpp"

namespace bindlab::oracle {

// Least set containing `kb`, closed under decomposition and under
// composition restricted to members of `universe`.  The universe must be
// subterm-closed and contain dh_pub(e) for every exponent appearing in a
// DhShared member, otherwise derivable universe members can be missed.
class Closure {
 public:
  Closure(const std::vector<Term>& universe, const std::vector<Term>& kb)
      : universe_(universe) {
    for (const Term& t : kb) mark(t);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Term& t : universe_) changed |= step(t);
    }
  }

  bool derivable(const Term& t) const {
    if (t.kind() == Kind::Tag || t.kind() == Kind::Name) return true;
    auto it = marked_.find(t);
    return it != marked_.end() && it->second;
  }

 private:
  bool known(const Term& t) const {
    auto it = marked_.find(t);
    return it != marked_.end() && it->second;
  }

  bool mark(const Term& t) {
    bool& m = marked_[t];
    if (m) return false;
    m = true;
    return true;
  }

  bool pub(const Term& t) const {
    return t.kind() == Kind::Tag || t.kind() == Kind::Name || known(t);
  }

  // One monotone pass over a single universe member: mark it if composable
  // from marked parts, and mark whatever it releases if already marked.
  bool step(const Term& t) {
    bool changed = false;
    if (!known(t)) {
      bool make = false;
      switch (t.kind()) {
        case Kind::Tuple:
        case Kind::Hash: {
          make = true;
          for (const Term& p : t.parts()) make = make && pub(p);
          break;
        }
        case Kind::SymEnc:
        case Kind::AsymEnc:
        case Kind::Sig:
          make = pub(t.part(0)) && pub(t.part(1));
          break;
        case Kind::DhPub:
        case Kind::SymKey:
          make = pub(t.part(0));
          break;
        case Kind::DhShared:
          make = (pub(t.part(0)) && pub(dh_pub(t.part(1)))) ||
                 (pub(t.part(1)) && pub(dh_pub(t.part(0))));
          break;
        default:
          break;  // atoms are never composed
      }
      if (make) changed |= mark(t);
    }
    if (known(t)) {
      switch (t.kind()) {
        case Kind::Tuple:
          for (const Term& p : t.parts()) changed |= mark(p);
          break;
        case Kind::Sig:
        case Kind::SymKey:
          changed |= mark(t.part(t.kind() == Kind::Sig ? 1 : 0));
          break;
        case Kind::SymEnc:
          if (pub(t.part(0))) changed |= mark(t.part(1));
          break;
        case Kind::AsymEnc:
          if (t.part(0).kind() == Kind::PubKey && known(privk(t.part(0).text())))
            changed |= mark(t.part(1));
          break;
        case Kind::DhExp:
          for (const Term& u : universe_)
            if (u.kind() == Kind::DhPub && known(u) && u.part(0) != t)
              changed |= mark(dh_shared(t, u.part(0)));
          break;
        default:
          break;
      }
    }
    return changed;
  }

  const std::vector<Term>& universe_;
  std::map<Term, bool> marked_;
};

}  // namespace bindlab::oracle
