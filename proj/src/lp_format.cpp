#include "kep/lp_format.hpp"

#include <cctype>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "kep/instance.hpp"
#include "text_util.hpp"

namespace kep {
namespace {

constexpr int kTermsPerLine = 8;

void write_terms(std::ostream& out, const IpModel& model, const std::vector<Term>& terms) {
  int on_line = 0;
  for (const Term& t : terms) {
    if (on_line == kTermsPerLine) {
      out << "\n   ";
      on_line = 0;
    }
    out << (t.coef < 0 ? " - " : " + ") << format_number(std::abs(t.coef)) << ' ' << model.variable_name(t.var);
    ++on_line;
  }
}

enum class TokenKind { Word, Number, Sign, Colon, Relation };

struct Token {
  TokenKind kind;
  std::string text;
  int line;
};

bool word_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '#' || c == '[' || c == ']';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  detail::for_each_line(text, [&](int line_no, std::string_view line) {
    if (!line.empty() && line.front() == '\\') return;
    std::size_t i = 0;
    while (i < line.size()) {
      const char c = line[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (word_start(c)) {
        std::size_t j = i;
        while (j < line.size() && word_char(line[j])) ++j;
        tokens.push_back({TokenKind::Word, std::string(line.substr(i, j - i)), line_no});
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t j = i;
        while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) ++j;
        if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
          if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
            j = k;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
          }
        }
        tokens.push_back({TokenKind::Number, std::string(line.substr(i, j - i)), line_no});
        i = j;
      } else if (c == '+' || c == '-') {
        tokens.push_back({TokenKind::Sign, std::string(1, c), line_no});
        ++i;
      } else if (c == ':') {
        tokens.push_back({TokenKind::Colon, ":", line_no});
        ++i;
      } else if (c == '<' || c == '>' || c == '=') {
        std::size_t j = i + 1;
        if (j < line.size() && line[j] == '=') ++j;
        std::string op(line.substr(i, j - i));
        if (op == "<") op = "<=";
        if (op == ">") op = ">=";
        if (op == "=<") op = "<=";
        if (op == "=>") op = ">=";
        if (op == "==") op = "=";
        tokens.push_back({TokenKind::Relation, op, line_no});
        i = j;
      } else {
        throw ParseError(line_no, std::string("unexpected character '") + c + "'");
      }
    }
  });
  return tokens;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  LpDocument parse() {
    LpDocument doc;
    const std::string sense = expect_keyword();
    if (sense == "maximize" || sense == "max" || sense == "maximum") {
      doc.maximize = true;
    } else if (sense == "minimize" || sense == "min" || sense == "minimum") {
      doc.maximize = false;
    } else {
      fail("expected Maximize or Minimize");
    }
    if (peek_colon_after_word()) pos_ += 2;
    doc.objective = parse_expression();

    if (!at_subject_to()) fail("expected 'Subject To'");
    pos_ += lower(tokens_[pos_].text) == "st" ? 1 : 2;
    std::set<std::string> row_names;
    while (!at_end() && !at_section()) {
      LpRow row;
      const int line = tokens_[pos_].line;
      if (peek_colon_after_word()) {
        row.name = tokens_[pos_].text;
        pos_ += 2;
      } else {
        row.name = "R" + std::to_string(doc.rows.size() + 1);
      }
      if (!row_names.insert(row.name).second) throw ParseError(line, "duplicate row name " + row.name);
      row.terms = parse_expression();
      if (row.terms.empty()) throw ParseError(line, "row " + row.name + " has no terms");
      if (at_end() || tokens_[pos_].kind != TokenKind::Relation) fail("expected <=, >= or = in row " + row.name);
      const std::string& op = tokens_[pos_].text;
      row.relation = op == "<=" ? Relation::LessEqual : op == ">=" ? Relation::GreaterEqual : Relation::Equal;
      ++pos_;
      row.rhs = parse_signed_number();
      doc.rows.push_back(std::move(row));
    }

    if (at_end()) fail("missing End");
    std::string section = lower(tokens_[pos_].text);
    if (section == "bounds") fail("Bounds section is not supported");
    std::set<std::string> binary;
    if (section == "binaries" || section == "binary" || section == "bin") {
      ++pos_;
      while (!at_end() && !at_section()) {
        if (tokens_[pos_].kind != TokenKind::Word) fail("expected a variable name");
        if (!binary.insert(tokens_[pos_].text).second) fail("duplicate binary " + tokens_[pos_].text);
        doc.binaries.push_back(tokens_[pos_].text);
        ++pos_;
      }
      if (at_end()) fail("missing End");
      section = lower(tokens_[pos_].text);
    }
    if (section != "end") fail("expected End");
    ++pos_;
    if (!at_end()) fail("text after End");

    auto check_declared = [&](const std::vector<LpTerm>& terms, const std::string& where) {
      for (const LpTerm& t : terms) {
        if (!binary.count(t.var)) throw ParseError(last_line(), "variable " + t.var + " in " + where + " is not declared binary");
      }
    };
    check_declared(doc.objective, "the objective");
    for (const LpRow& row : doc.rows) check_declared(row.terms, row.name);
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  int last_line() const { return tokens_.empty() ? 1 : tokens_.back().line; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(at_end() ? last_line() : tokens_[pos_].line, what);
  }

  std::string expect_keyword() {
    if (at_end() || tokens_[pos_].kind != TokenKind::Word) fail("expected a section keyword");
    return lower(tokens_[pos_++].text);
  }

  bool peek_colon_after_word() const {
    return pos_ + 1 < tokens_.size() && tokens_[pos_].kind == TokenKind::Word &&
           tokens_[pos_ + 1].kind == TokenKind::Colon;
  }

  bool at_subject_to() const {
    if (at_end() || tokens_[pos_].kind != TokenKind::Word) return false;
    const std::string w = lower(tokens_[pos_].text);
    if (w == "st") return true;
    return (w == "subject" || w == "such") && pos_ + 1 < tokens_.size() &&
           lower(tokens_[pos_ + 1].text) == (w == "subject" ? "to" : "that");
  }

  bool at_section() const {
    if (at_end() || tokens_[pos_].kind != TokenKind::Word) return false;
    if (peek_colon_after_word()) return false;
    const std::string w = lower(tokens_[pos_].text);
    return w == "bounds" || w == "binaries" || w == "binary" || w == "bin" || w == "general" || w == "generals" ||
           w == "end" || at_subject_to();
  }

  double parse_signed_number() {
    double sign = 1.0;
    if (!at_end() && tokens_[pos_].kind == TokenKind::Sign) {
      sign = tokens_[pos_].text == "-" ? -1.0 : 1.0;
      ++pos_;
    }
    if (at_end() || tokens_[pos_].kind != TokenKind::Number) fail("expected a number");
    const auto v = detail::parse_double(tokens_[pos_].text);
    if (!v) fail("bad number " + tokens_[pos_].text);
    ++pos_;
    return sign * *v;
  }

  // Terms until a relation, section keyword, row label or end of input.
  std::vector<LpTerm> parse_expression() {
    std::vector<LpTerm> terms;
    bool first = true;
    while (!at_end()) {
      const Token& t = tokens_[pos_];
      if (t.kind == TokenKind::Relation || at_section() || peek_colon_after_word()) break;
      double coef = 1.0;
      if (t.kind == TokenKind::Sign) {
        coef = t.text == "-" ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        fail("expected + or - between terms");
      }
      if (!at_end() && tokens_[pos_].kind == TokenKind::Number) {
        const auto v = detail::parse_double(tokens_[pos_].text);
        if (!v) fail("bad number " + tokens_[pos_].text);
        coef *= *v;
        ++pos_;
      }
      if (at_end() || tokens_[pos_].kind != TokenKind::Word) fail("expected a variable name");
      terms.push_back({tokens_[pos_].text, coef});
      ++pos_;
      first = false;
    }
    return terms;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_lp(std::ostream& out, const IpModel& model) {
  out << "Maximize\n obj:";
  std::vector<Term> objective;
  for (int i = 0; i < model.num_variables(); ++i) {
    const double c = model.objective()[static_cast<std::size_t>(i)];
    if (c != 0.0) objective.push_back({VarId{i}, c});
  }
  write_terms(out, model, objective);
  out << "\nSubject To\n";
  std::map<std::string, int> per_tag;
  for (const LinearConstraint& c : model.constraints()) {
    const std::string tag = c.tag.empty() ? "c" : c.tag;
    out << ' ' << tag << '_' << per_tag[tag]++ << ':';
    write_terms(out, model, c.terms);
    out << ' ' << to_string(c.relation) << ' ' << format_number(c.rhs) << '\n';
  }
  out << "Binaries\n";
  for (int i = 0; i < model.num_variables(); ++i) {
    out << ' ' << model.variable_name(VarId{i});
    if ((i + 1) % 10 == 0 || i + 1 == model.num_variables()) out << '\n';
  }
  out << "End\n";
}

std::string export_lp_text(const IpModel& model) {
  std::ostringstream out;
  write_lp(out, model);
  return out.str();
}

LpDocument parse_lp_text(std::string_view text) { return Parser(tokenize(text)).parse(); }

}  // namespace kep
