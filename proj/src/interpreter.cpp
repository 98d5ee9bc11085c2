#include "imp2/interpreter.hpp"

#include "imp2/error.hpp"

#include <set>
#include <unordered_map>

namespace imp2 {

std::string_view status_name(Status s) {
  switch (s) {
  case Status::Halted: return "Halted";
  case Status::Extension: return "Extension";
  case Status::ReadPastEnd: return "ReadPastEnd";
  case Status::LoopDetected: return "LoopDetected";
  case Status::ThresholdSurpassed: return "ThresholdSurpassed";
  }
  return "?";
}

std::optional<Status> parse_status(std::string_view name) {
  for (Status s : kAllStatuses)
    if (status_name(s) == name)
      return s;
  return std::nullopt;
}

BitString extract_output(const Memory& memory) {
  BitString out;
  for (const auto& [location, value] : memory)
    append_binstring(Natural(value), out);
  return out;
}

namespace {

void collect_locations(const ArithExpr& e, std::set<BigInt>& out) {
  if (e->kind == ArithKind::Loc)
    out.insert(e->value);
  if (e->lhs)
    collect_locations(e->lhs, out);
  if (e->rhs)
    collect_locations(e->rhs, out);
}

void collect_locations(const BoolExpr& e, std::set<BigInt>& out) {
  if (e->lhs_arith)
    collect_locations(e->lhs_arith, out);
  if (e->rhs_arith)
    collect_locations(e->rhs_arith, out);
  if (e->lhs)
    collect_locations(e->lhs, out);
  if (e->rhs)
    collect_locations(e->rhs, out);
}

void collect_locations(const Sentence& s, std::set<BigInt>& out) {
  if (s->kind == StmtKind::Assign)
    out.insert(s->location);
  if (s->expr)
    collect_locations(s->expr, out);
  if (s->cond)
    collect_locations(s->cond, out);
  if (s->first)
    collect_locations(s->first, out);
  if (s->second)
    collect_locations(s->second, out);
}

} // namespace

Program::Program(const Sentence& s) {
  std::set<BigInt> locations;
  collect_locations(s, locations);
  for (const auto& l : locations) {
    slot_index_.emplace(l, static_cast<std::uint32_t>(locations_.size()));
    locations_.push_back(l);
  }
  root_ = lower(s);
}

std::uint32_t Program::slot_of(const BigInt& location) {
  return slot_index_.at(location);
}

std::uint32_t Program::lower(const Sentence& s) {
  Node n{Op::Skip};
  switch (s->kind) {
  case StmtKind::Skip:
    break;
  case StmtKind::Assign:
    n = {Op::Assign, slot_of(s->location), lower(s->expr)};
    break;
  case StmtKind::While: {
    auto cond = lower(s->cond);
    n = {Op::While, cond, lower(s->first)};
    break;
  }
  case StmtKind::Seq: {
    auto first = lower(s->first);
    n = {Op::Seq, first, lower(s->second)};
    break;
  }
  case StmtKind::If: {
    auto cond = lower(s->cond);
    auto then_branch = lower(s->first);
    n = {Op::If, cond, then_branch, lower(s->second)};
    break;
  }
  }
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t Program::lower(const BoolExpr& e) {
  Node n{Op::True};
  switch (e->kind) {
  case BoolKind::True:
    break;
  case BoolKind::False:
    n.op = Op::False;
    break;
  case BoolKind::Eq:
  case BoolKind::Lt: {
    auto l = lower(e->lhs_arith);
    n = {e->kind == BoolKind::Eq ? Op::Eq : Op::Lt, l, lower(e->rhs_arith)};
    break;
  }
  case BoolKind::And:
  case BoolKind::Or: {
    auto l = lower(e->lhs);
    n = {e->kind == BoolKind::And ? Op::And : Op::Or, l, lower(e->rhs)};
    break;
  }
  case BoolKind::Not:
    n = {Op::Not, lower(e->lhs)};
    break;
  }
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t Program::lower(const ArithExpr& e) {
  Node n{Op::ReadBit};
  switch (e->kind) {
  case ArithKind::ReadBit:
    break;
  case ArithKind::Lit:
    constants_.emplace_back(e->value);
    n = {Op::Lit, static_cast<std::uint32_t>(constants_.size() - 1)};
    break;
  case ArithKind::Loc:
    n = {Op::Loc, slot_of(e->value)};
    break;
  case ArithKind::Add:
  case ArithKind::Sub:
  case ArithKind::Mul: {
    Op op = e->kind == ArithKind::Add   ? Op::Add
            : e->kind == ArithKind::Sub ? Op::Sub
                                        : Op::Mul;
    auto l = lower(e->lhs);
    n = {op, l, lower(e->rhs)};
    break;
  }
  }
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

namespace {

using Op = Program::Op;

class Machine {
public:
  Machine(const Program& p, const BitString& known,
          std::optional<std::size_t> input_length, const ExecLimits& limits)
      : program_(p), nodes_(p.nodes()), known_(known),
        input_length_(input_length), limits_(limits),
        memory_(p.slot_count()) {}

  PartialRun run() {
    exec(program_.root());
    PartialRun out;
    out.steps_used = steps_;
    out.bits_consumed = cursor_;
    switch (stop_) {
    case Stop::None:
      out.event = Event::Terminated;
      for (const auto& v : memory_)
        append_binstring(v, out.output);
      break;
    case Stop::NeedInput: out.event = Event::NeedInput; break;
    case Stop::ReadPastEnd: out.event = Event::ReadPastEnd; break;
    case Stop::Loop: out.event = Event::LoopDetected; break;
    case Stop::Threshold: out.event = Event::ThresholdSurpassed; break;
    }
    return out;
  }

  const std::vector<Natural>& memory() const noexcept { return memory_; }

private:
  enum class Stop { None, NeedInput, ReadPastEnd, Loop, Threshold };

  struct Snapshot {
    std::uint32_t guard;
    std::size_t cursor;
    std::vector<Natural> memory;
  };

  bool step() {
    if (++steps_ > limits_.threshold) {
      stop_ = Stop::Threshold;
      return false;
    }
    return true;
  }

  bool stopped() const noexcept { return stop_ != Stop::None; }

  // Records the configuration at a guard; true if it was seen before.
  bool revisited(std::uint32_t guard) {
    std::uint64_t h = (guard + 1) * 0x9E3779B97F4A7C15ULL ^ cursor_;
    for (const auto& v : memory_)
      h = (h ^ v.hash()) * 0x100000001B3ULL + 0x7F4A7C15ULL;
    auto& bucket = seen_[h];
    for (std::size_t i : bucket) {
      const auto& s = snapshots_[i];
      if (s.guard == guard && s.cursor == cursor_ && s.memory == memory_)
        return true;
    }
    bucket.push_back(snapshots_.size());
    snapshots_.push_back({guard, cursor_, memory_});
    return false;
  }

  void exec(std::uint32_t id) {
    if (!step())
      return;
    const auto& n = nodes_[id];
    switch (n.op) {
    case Op::Skip:
      return;
    case Op::Assign: {
      Natural v = eval(n.b);
      if (!stopped())
        memory_[n.a] = std::move(v);
      return;
    }
    case Op::Seq:
      exec(n.a);
      if (!stopped())
        exec(n.b);
      return;
    case Op::If: {
      bool c = test(n.a);
      if (!stopped())
        exec(c ? n.b : n.c);
      return;
    }
    case Op::While:
      for (;;) {
        if (revisited(id)) {
          stop_ = Stop::Loop;
          return;
        }
        bool c = test(n.a);
        if (stopped() || !c)
          return;
        exec(n.b);
        if (stopped() || !step())
          return;
      }
    default:
      throw Error("malformed program: expression in statement position");
    }
  }

  bool test(std::uint32_t id) {
    if (!step())
      return false;
    const auto& n = nodes_[id];
    switch (n.op) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Eq:
    case Op::Lt: {
      Natural l = eval(n.a);
      if (stopped())
        return false;
      Natural r = eval(n.b);
      return n.op == Op::Eq ? l == r : l < r;
    }
    case Op::And:
    case Op::Or: {
      bool l = test(n.a);
      if (stopped())
        return false;
      bool r = test(n.b);
      return n.op == Op::And ? (l && r) : (l || r);
    }
    case Op::Not:
      return !test(n.a);
    default:
      throw Error("malformed program: expected a boolean node");
    }
  }

  Natural eval(std::uint32_t id) {
    if (!step())
      return {};
    const auto& n = nodes_[id];
    switch (n.op) {
    case Op::ReadBit:
      if (input_length_ && cursor_ >= *input_length_) {
        stop_ = Stop::ReadPastEnd;
        return {};
      }
      if (cursor_ >= known_.size()) {
        stop_ = Stop::NeedInput;
        return {};
      }
      return Natural(known_[cursor_++] ? 1U : 0U);
    case Op::Lit:
      return program_.constants()[n.a];
    case Op::Loc:
      return memory_[n.a];
    case Op::Add:
    case Op::Sub:
    case Op::Mul: {
      Natural l = eval(n.a);
      if (stopped())
        return {};
      Natural r = eval(n.b);
      if (stopped())
        return {};
      Natural v = n.op == Op::Add   ? l + r
                  : n.op == Op::Sub ? monus(l, r)
                                    : l * r;
      if (!v.is_small() && v.bit_length() > limits_.max_value_bits) {
        stop_ = Stop::Threshold;
        return {};
      }
      return v;
    }
    default:
      throw Error("malformed program: expected an arithmetic node");
    }
  }

  const Program& program_;
  const std::vector<Program::Node>& nodes_;
  const BitString& known_;
  std::optional<std::size_t> input_length_;
  ExecLimits limits_;

  std::vector<Natural> memory_;
  std::size_t cursor_ = 0;
  std::uint64_t steps_ = 0;
  Stop stop_ = Stop::None;

  std::vector<Snapshot> snapshots_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen_;
};

} // namespace

PartialRun run_prefix(const Program& p, const BitString& known,
                      std::optional<std::size_t> input_length,
                      const ExecLimits& limits) {
  if (limits.threshold < 1)
    throw InvalidArgument("threshold must be at least 1");
  return Machine(p, known, input_length, limits).run();
}

ExecOutcome execute(const Program& p, const BitString& input,
                    const ExecLimits& limits) {
  if (limits.threshold < 1)
    throw InvalidArgument("threshold must be at least 1");
  Machine m(p, input, input.size(), limits);
  PartialRun run = m.run();
  ExecOutcome out;
  out.steps_used = run.steps_used;
  out.bits_consumed = run.bits_consumed;
  switch (run.event) {
  case Event::Terminated: {
    bool exact = run.bits_consumed == input.size();
    out.status = exact ? Status::Halted : Status::Extension;
    if (exact)
      out.output = std::move(run.output);
    Memory memory;
    for (std::size_t i = 0; i < p.slot_count(); ++i)
      if (!m.memory()[i].is_zero())
        memory.emplace(p.locations()[i], m.memory()[i].to_big());
    out.memory = std::move(memory);
    break;
  }
  case Event::ReadPastEnd:
  case Event::NeedInput: // unreachable: the whole stream is known
    out.status = Status::ReadPastEnd;
    break;
  case Event::LoopDetected:
    out.status = Status::LoopDetected;
    break;
  case Event::ThresholdSurpassed:
    out.status = Status::ThresholdSurpassed;
    break;
  }
  return out;
}

ExecOutcome execute(const Sentence& s, const BitString& input,
                    const ExecLimits& limits) {
  return execute(Program(s), input, limits);
}

ExecOutcome execute(const ProgramCode& code, const ExecLimits& limits) {
  return execute(sentence_unrank(code.sentence_index), code.input, limits);
}

} // namespace imp2
