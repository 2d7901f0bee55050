//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/logic/gmsc.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "mpa/detail/gml_parse.hpp"
#include "mpa/detail/intern.hpp"
#include "mpa/detail/lexer.hpp"

namespace mpa {

std::optional<std::size_t> GmscProgram::index_of(const std::string &name) const {
  auto it = std::find(variables.begin(), variables.end(), name);
  if (it == variables.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variables.begin());
}

std::uint64_t GmscProgram::appointed_mask() const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < appointed.size(); ++i)
    if (appointed[i]) m |= std::uint64_t{1} << i;
  return m;
}

std::uint64_t GmscProgram::max_grade() const {
  std::uint64_t k = 1;
  for (auto &f : init_bodies) k = std::max(k, mpa::max_grade(f));
  for (auto &f : rule_bodies) k = std::max(k, mpa::max_grade(f));
  return k;
}

GmscProgram parse_gmsc(std::string_view text) {
  auto tokens = detail::tokenize(text);

  // First pass: collect declared heads so rule bodies can tell schema
  // variables from propositions.
  std::set<std::string> declared;
  std::vector<std::string> order;
  {
    detail::TokenCursor cur(tokens);
    while (!cur.at_end()) {
      if (cur.peek().kind == detail::Tok::Ident &&
          (cur.is_punct(":-", 1) || (cur.is_punct("(", 1) && cur.is_punct(":-", 4)))) {
        auto name = cur.peek().text;
        if (declared.insert(name).second) order.push_back(name);
      }
      while (!cur.at_end() && !cur.is_punct(";")) cur.next();
      cur.accept(";");
    }
  }
  if (order.size() > 64) throw Error("GMSC programs support at most 64 variables");

  GmscProgram prog;
  prog.variables = order;
  prog.init_bodies.resize(order.size());
  prog.rule_bodies.resize(order.size());
  prog.appointed.assign(order.size(), false);
  bool saw_appointed = false;

  detail::TokenCursor cur(tokens);
  while (!cur.at_end()) {
    if (cur.is_word("appointed") && cur.is_punct(":", 1)) {
      if (saw_appointed) cur.fail("duplicate appointed list");
      saw_appointed = true;
      cur.next();
      cur.next();
      if (!cur.is_punct(";")) {
        do {
          auto name = cur.ident("variable");
          auto idx = prog.index_of(name);
          if (!idx) throw UnboundVariable(name);
          prog.appointed[*idx] = true;
        } while (cur.accept(","));
      }
      cur.expect(";");
      continue;
    }
    auto head_tok = cur.peek();
    auto name = cur.ident("rule head");
    auto idx = *prog.index_of(name);
    bool init = false;
    if (cur.accept("(")) {
      if (cur.number() != 0) cur.fail("only X(0) initial rules exist");
      cur.expect(")");
      init = true;
    }
    cur.expect(":-");
    auto &slot = init ? prog.init_bodies[idx] : prog.rule_bodies[idx];
    if (slot)
      throw SyntaxError("duplicate rule for " + name, head_tok.line, head_tok.column);
    slot = parse_gml_tokens(cur, init ? std::set<std::string>{} : declared);
    cur.expect(";");
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!prog.init_bodies[i]) throw Error("GMSC: variable " + order[i] + " lacks an X(0) rule");
    if (!prog.rule_bodies[i]) throw Error("GMSC: variable " + order[i] + " lacks a rule body");
  }
  return prog;
}

std::string to_string(const GmscProgram &p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i)
    out += p.variables[i] + "(0) :- " + to_string(p.init_bodies[i]) + ";\n";
  for (std::size_t i = 0; i < p.size(); ++i)
    out += p.variables[i] + " :- " + to_string(p.rule_bodies[i]) + ";\n";
  out += "appointed:";
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.appointed[i]) {
      out += (first ? " " : ", ") + p.variables[i];
      first = false;
    }
  return out + ";\n";
}

TruthConfig gmsc_eval_round(const KripkeModel &model, const GmscProgram &program,
                            const TruthConfig *prev) {
  TruthConfig out(model.size(), 0);
  for (std::size_t i = 0; i < program.size(); ++i) {
    auto vals = prev ? gml_eval_all(model, program.rule_bodies[i], program.variables, prev)
                     : gml_eval_all(model, program.init_bodies[i]);
    for (std::size_t v = 0; v < model.size(); ++v)
      if (vals[v]) out[v] |= std::uint64_t{1} << i;
  }
  return out;
}

GmscTrace gmsc_trace(const KripkeModel &model, const GmscProgram &program) {
  GmscTrace trace;
  std::unordered_map<TruthConfig, std::size_t, detail::VectorHash> seen;
  TruthConfig cur = gmsc_eval_round(model, program, nullptr);
  while (true) {
    auto [it, fresh] = seen.emplace(cur, trace.rounds.size());
    if (!fresh) {
      trace.cycle_start = it->second;
      return trace;
    }
    trace.rounds.push_back(cur);
    cur = gmsc_eval_round(model, program, &trace.rounds.back());
  }
}

bool gmsc_accepts(const KripkeModel &model, NodeId node, const GmscProgram &program) {
  if (node >= model.size()) throw UnknownNode("node " + std::to_string(node));
  auto mask = program.appointed_mask();
  if (mask == 0) return false;
  for (auto &cfg : gmsc_trace(model, program).rounds)
    if (cfg[node] & mask) return true;
  return false;
}

}  // namespace mpa
