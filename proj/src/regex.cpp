#include "tdfa/regex.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"

namespace tdfa {

RegexPtr Regex::empty() {
    return std::make_shared<Regex>();
}

RegexPtr Regex::sym(std::uint8_t c) {
    auto e = std::make_shared<Regex>();
    e->kind = Kind::Symbol;
    e->symbol = c;
    return e;
}

RegexPtr Regex::tagged(tdfa::Tag t) {
    auto e = std::make_shared<Regex>();
    e->kind = Kind::Tag;
    e->tag = t;
    return e;
}

RegexPtr Regex::alt(RegexPtr l, RegexPtr r) {
    auto e = std::make_shared<Regex>();
    e->kind = Kind::Alt;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

RegexPtr Regex::cat(RegexPtr l, RegexPtr r) {
    auto e = std::make_shared<Regex>();
    e->kind = Kind::Cat;
    e->left = std::move(l);
    e->right = std::move(r);
    return e;
}

RegexPtr Regex::rep(RegexPtr body, int lo, int hi) {
    if (lo < 0 || (hi != kInfinity && hi < lo)) {
        throw std::invalid_argument("invalid repetition bounds");
    }
    auto e = std::make_shared<Regex>();
    e->kind = Kind::Rep;
    e->left = std::move(body);
    e->lo = lo;
    e->hi = hi;
    return e;
}

namespace {

bool is_special(char c) {
    switch (c) {
    case '|': case '(': case ')': case '{': case '}':
    case '*': case '+': case '?': case '#': case '\\':
        return true;
    default:
        return false;
    }
}

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& opts) : text_(text), opts_(opts) {}

    RegexPtr parse() {
        RegexPtr e = parse_alt();
        if (pos_ < text_.size()) {
            // only an unmatched ')' can stop parse_alt early
            throw SyntaxError("unmatched ')'", pos_);
        }
        return e;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    RegexPtr parse_alt() {
        RegexPtr e = parse_cat();
        while (!at_end() && peek() == '|') {
            ++pos_;
            e = Regex::alt(std::move(e), parse_cat());
        }
        return e;
    }

    RegexPtr parse_cat() {
        std::vector<RegexPtr> items;
        while (!at_end() && peek() != '|' && peek() != ')') {
            items.push_back(parse_rep());
        }
        if (items.empty()) return Regex::empty();
        RegexPtr e = items.back();
        for (auto it = items.rbegin() + 1; it != items.rend(); ++it) {
            e = Regex::cat(*it, std::move(e));
        }
        return e;
    }

    int parse_number() {
        std::size_t start = pos_;
        long value = 0;
        while (!at_end() && peek() >= '0' && peek() <= '9') {
            value = value * 10 + (peek() - '0');
            if (value > opts_.max_bound) {
                throw SyntaxError("repetition bound exceeds " + std::to_string(opts_.max_bound), start);
            }
            ++pos_;
        }
        if (pos_ == start) throw SyntaxError("expected number", pos_);
        return static_cast<int>(value);
    }

    RegexPtr parse_rep() {
        RegexPtr e = parse_atom();
        while (!at_end()) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                e = Regex::rep(std::move(e), 0, kInfinity);
            } else if (c == '+') {
                ++pos_;
                e = Regex::rep(std::move(e), 1, kInfinity);
            } else if (c == '?') {
                ++pos_;
                e = Regex::rep(std::move(e), 0, 1);
            } else if (c == '{') {
                const std::size_t start = pos_++;
                const int lo = parse_number();
                int hi = lo;
                if (!at_end() && peek() == ',') {
                    ++pos_;
                    hi = (!at_end() && peek() == '}') ? kInfinity : parse_number();
                }
                if (at_end() || peek() != '}') throw SyntaxError("expected '}'", pos_);
                ++pos_;
                if (hi != kInfinity && lo > hi) {
                    throw SyntaxError("repetition lower bound exceeds upper bound", start);
                }
                e = Regex::rep(std::move(e), lo, hi);
            } else {
                break;
            }
        }
        return e;
    }

    RegexPtr parse_atom() {
        const std::size_t start = pos_;
        const char c = peek();
        switch (c) {
        case '(': {
            ++pos_;
            bool capture = true;
            if (text_.substr(pos_, 2) == "?:") {
                capture = false;
                pos_ += 2;
            }
            const Tag open = capture ? ++ntags_ : 0;
            RegexPtr body = parse_alt();
            if (at_end() || peek() != ')') throw SyntaxError("unmatched '('", start);
            ++pos_;
            if (!capture) return body;
            const Tag close = ++ntags_;
            return Regex::cat(Regex::tagged(open), Regex::cat(std::move(body), Regex::tagged(close)));
        }
        case '#':
            ++pos_;
            return Regex::tagged(++ntags_);
        case '\\':
            if (pos_ + 1 >= text_.size()) throw SyntaxError("dangling escape", pos_);
            pos_ += 2;
            return Regex::sym(static_cast<std::uint8_t>(text_[start + 1]));
        case '*': case '+': case '?': case '{':
            throw SyntaxError("nothing to repeat", pos_);
        case '}':
            throw SyntaxError("unescaped '}'", pos_);
        default:
            ++pos_;
            return Regex::sym(static_cast<std::uint8_t>(c));
        }
    }

    std::string_view text_;
    ParseOptions opts_;
    std::size_t pos_ = 0;
    Tag ntags_ = 0;
};

// Precedence levels for printing: 0 alt, 1 cat, 2 rep/atom.
void print(const Regex& e, int prec, std::string& out) {
    using K = Regex::Kind;
    switch (e.kind) {
    case K::Empty:
        if (prec > 0) out += "(?:)";
        break;
    case K::Symbol: {
        const char c = static_cast<char>(e.symbol);
        if (is_special(c)) out += '\\';
        out += c;
        break;
    }
    case K::Tag:
        out += '#';
        break;
    case K::Alt:
        if (prec > 0) out += "(?:";
        print(*e.left, 0, out);
        out += '|';
        print(*e.right, e.right->kind == K::Alt ? 1 : 0, out);
        if (prec > 0) out += ')';
        break;
    case K::Cat:
        if (prec > 1) out += "(?:";
        print(*e.left, e.left->kind == K::Cat ? 2 : 1, out);
        print(*e.right, 1, out);
        if (prec > 1) out += ')';
        break;
    case K::Rep:
        print(*e.left, 2, out);
        if (e.lo == 0 && e.hi == kInfinity) {
            out += '*';
        } else if (e.lo == 1 && e.hi == kInfinity) {
            out += '+';
        } else if (e.lo == 0 && e.hi == 1) {
            out += '?';
        } else if (e.hi == kInfinity) {
            out += '{' + std::to_string(e.lo) + ",}";
        } else if (e.lo == e.hi) {
            out += '{' + std::to_string(e.lo) + '}';
        } else {
            out += '{' + std::to_string(e.lo) + ',' + std::to_string(e.hi) + '}';
        }
        break;
    }
}

RegexPtr auto_tag_rec(const RegexPtr& e, Tag& next) {
    using K = Regex::Kind;
    const Tag open = ++next;
    RegexPtr inner;
    switch (e->kind) {
    case K::Empty:
    case K::Symbol:
        inner = e;
        break;
    case K::Tag:
        throw std::invalid_argument("auto_tag expects an untagged expression");
    case K::Alt: {
        RegexPtr l = auto_tag_rec(e->left, next);
        RegexPtr r = auto_tag_rec(e->right, next);
        inner = Regex::alt(std::move(l), std::move(r));
        break;
    }
    case K::Cat: {
        RegexPtr l = auto_tag_rec(e->left, next);
        RegexPtr r = auto_tag_rec(e->right, next);
        inner = Regex::cat(std::move(l), std::move(r));
        break;
    }
    case K::Rep:
        inner = Regex::rep(auto_tag_rec(e->left, next), e->lo, e->hi);
        break;
    }
    const Tag close = ++next;
    if (e->kind == K::Empty) {
        return Regex::cat(Regex::tagged(open), Regex::tagged(close));
    }
    return Regex::cat(Regex::tagged(open), Regex::cat(std::move(inner), Regex::tagged(close)));
}

void collect_tags(const Regex& e, std::vector<Tag>& out) {
    using K = Regex::Kind;
    switch (e.kind) {
    case K::Tag: out.push_back(e.tag); break;
    case K::Alt:
    case K::Cat:
        collect_tags(*e.left, out);
        collect_tags(*e.right, out);
        break;
    case K::Rep: collect_tags(*e.left, out); break;
    default: break;
    }
}

// Recognizes Cat(Tag o, Cat(x, Tag c)) and Cat(Tag o, Tag c).
bool as_pair(const Regex& e, Tag& open, Tag& close, const Regex*& inner) {
    using K = Regex::Kind;
    if (e.kind != K::Cat || e.left->kind != K::Tag) return false;
    const Regex& r = *e.right;
    if (r.kind == K::Tag) {
        open = e.left->tag;
        close = r.tag;
        inner = nullptr;
        return true;
    }
    if (r.kind == K::Cat && r.right->kind == K::Tag) {
        open = e.left->tag;
        close = r.right->tag;
        inner = r.left.get();
        return true;
    }
    return false;
}

void nesting_rec(const Regex& e, TagNesting& nest) {
    using K = Regex::Kind;
    Tag open = 0, close = 0;
    const Regex* inner = nullptr;
    if (as_pair(e, open, close, inner)) {
        std::vector<Tag> inside;
        if (inner) {
            collect_tags(*inner, inside);
            std::sort(inside.begin(), inside.end());
            nesting_rec(*inner, nest);
        }
        nest[open - 1] = inside;
        nest[close - 1] = inside;
        return;
    }
    switch (e.kind) {
    case K::Alt:
    case K::Cat:
        nesting_rec(*e.left, nest);
        nesting_rec(*e.right, nest);
        break;
    case K::Rep: nesting_rec(*e.left, nest); break;
    default: break;
    }
}

nlohmann::json json_of(const Regex& e) {
    using K = Regex::Kind;
    nlohmann::json j;
    switch (e.kind) {
    case K::Empty: j["kind"] = "empty"; break;
    case K::Symbol:
        j["kind"] = "symbol";
        j["symbol"] = std::string(1, static_cast<char>(e.symbol));
        break;
    case K::Tag:
        j["kind"] = "tag";
        j["tag"] = e.tag;
        break;
    case K::Alt:
    case K::Cat:
        j["kind"] = e.kind == K::Alt ? "alt" : "cat";
        j["children"] = {json_of(*e.left), json_of(*e.right)};
        break;
    case K::Rep:
        j["kind"] = "rep";
        j["lo"] = e.lo;
        j["hi"] = e.hi == kInfinity ? nlohmann::json("inf") : nlohmann::json(e.hi);
        j["children"] = {json_of(*e.left)};
        break;
    }
    return j;
}

} // namespace

RegexPtr parse_regex(std::string_view text, const ParseOptions& opts) {
    return Parser(text, opts).parse();
}

std::string to_pattern(const Regex& e) {
    std::string out;
    print(e, 0, out);
    return out;
}

RegexPtr auto_tag(const RegexPtr& e) {
    Tag next = 0;
    return auto_tag_rec(e, next);
}

std::vector<Tag> tags_of(const Regex& e) {
    std::vector<Tag> out;
    collect_tags(e, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int max_tag(const Regex& e) {
    const auto tags = tags_of(e);
    return tags.empty() ? 0 : tags.back();
}

std::size_t node_count(const Regex& e) {
    using K = Regex::Kind;
    switch (e.kind) {
    case K::Alt:
    case K::Cat: return 1 + node_count(*e.left) + node_count(*e.right);
    case K::Rep: return 1 + node_count(*e.left);
    default: return 1;
    }
}

bool nullable(const Regex& e) {
    using K = Regex::Kind;
    switch (e.kind) {
    case K::Empty:
    case K::Tag: return true;
    case K::Symbol: return false;
    case K::Alt: return nullable(*e.left) || nullable(*e.right);
    case K::Cat: return nullable(*e.left) && nullable(*e.right);
    case K::Rep: return e.lo == 0 || nullable(*e.left);
    }
    return false;
}

TagNesting auto_tag_nesting(const Regex& tagged, int ntags) {
    TagNesting nest(static_cast<std::size_t>(ntags));
    nesting_rec(tagged, nest);
    return nest;
}

std::string to_json(const Regex& e) {
    return json_of(e).dump();
}

} // namespace tdfa
