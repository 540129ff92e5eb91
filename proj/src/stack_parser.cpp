#include "fpcav/stack_parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fpcav/errors.hpp"

namespace fpcav
{
namespace
{
enum class Tok
{
    ident,
    number,
    lbrace,
    rbrace,
    equals,
    eof,
};

struct Token
{
    Tok kind = Tok::eof;
    std::string text;
    double value = 0.0;
    bool valid_number = true;
    SourcePos pos;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer
{
public:
    Lexer(std::string_view src, std::vector<Diagnostic> &diags) : src_(src), diags_(diags) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true)
        {
            skip_space();
            Token t;
            t.pos = {line_, col_};
            if (at_end())
            {
                t.kind = Tok::eof;
                out.push_back(t);
                return out;
            }
            const char c = src_[i_];
            if (is_ident_start(c))
            {
                t.kind = Tok::ident;
                while (!at_end() && is_ident_char(src_[i_]))
                    t.text += take();
                out.push_back(std::move(t));
            }
            else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+')
            {
                t.kind = Tok::number;
                lex_number(t.text);
                std::string_view s = t.text;
                if (!s.empty() && s.front() == '+')
                    s.remove_prefix(1);
                const auto res = std::from_chars(s.data(), s.data() + s.size(), t.value);
                if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(t.value))
                {
                    t.valid_number = false;
                    t.value = std::nan("");
                    diags_.push_back({Severity::error, DiagnosticCode::malformed_number, t.pos,
                                      "malformed number '" + t.text + "'"});
                }
                out.push_back(std::move(t));
            }
            else if (c == '{' || c == '}' || c == '=')
            {
                t.kind = c == '{' ? Tok::lbrace : c == '}' ? Tok::rbrace : Tok::equals;
                t.text = std::string(1, take());
                out.push_back(std::move(t));
            }
            else
            {
                diags_.push_back({Severity::error, DiagnosticCode::invalid_character, t.pos,
                                  std::string("invalid character '") + c + "'"});
                take();
            }
        }
    }

private:
    bool at_end() const { return i_ >= src_.size(); }
    bool peek_digit(std::size_t ahead = 0) const
    {
        return i_ + ahead < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + ahead]));
    }

    // sign? digits? ('.' digits?)? exponent?; a trailing '.' or digit run makes it malformed.
    void lex_number(std::string &text)
    {
        if (src_[i_] == '+' || src_[i_] == '-')
            text += take();
        while (peek_digit())
            text += take();
        if (!at_end() && src_[i_] == '.')
        {
            text += take();
            while (peek_digit())
                text += take();
        }
        if (!at_end() && (src_[i_] == 'e' || src_[i_] == 'E') &&
            (peek_digit(1) || (i_ + 2 < src_.size() && (src_[i_ + 1] == '-' || src_[i_ + 1] == '+') && peek_digit(2))))
        {
            text += take();
            if (src_[i_] == '-' || src_[i_] == '+')
                text += take();
            while (peek_digit())
                text += take();
        }
        while (!at_end() && (src_[i_] == '.' || peek_digit() || src_[i_] == '+' || src_[i_] == '-'))
            text += take();
    }

    char take()
    {
        const char c = src_[i_++];
        if (c == '\n')
        {
            ++line_;
            col_ = 1;
        }
        else
        {
            ++col_;
        }
        return c;
    }

    void skip_space()
    {
        while (!at_end())
        {
            const char c = src_[i_];
            if (c == '#')
                while (!at_end() && src_[i_] != '\n')
                    take();
            else if (std::isspace(static_cast<unsigned char>(c)))
                take();
            else
                break;
        }
    }

    std::string_view src_;
    std::vector<Diagnostic> &diags_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_top_keyword(const Token &t)
{
    return t.kind == Tok::ident && (t.text == "wavelength" || t.text == "material" || t.text == "stack");
}

bool is_item_keyword(const Token &t)
{
    return t.kind == Tok::ident && (t.text == "layer" || t.text == "qw" || t.text == "repeat");
}

std::string describe(const Token &t)
{
    return t.kind == Tok::eof ? "end of input" : "'" + t.text + "'";
}

class Parser
{
public:
    Parser(std::vector<Token> tokens, const MaterialLibrary &library, std::vector<Diagnostic> &diags)
        : toks_(std::move(tokens)), library_(library), diags_(diags)
    {
    }

    StackDocument run()
    {
        StackDocument doc;
        bool have_header = false;
        if (peek_ident("wavelength"))
        {
            parse_header(doc);
            have_header = true;
        }
        else
        {
            error(DiagnosticCode::missing_header, peek().pos, "document must start with 'wavelength <number> nm'");
        }

        bool have_stack = false;
        while (peek().kind != Tok::eof)
        {
            const Token &t = peek();
            if (t.kind == Tok::ident && t.text == "material")
            {
                if (have_stack)
                    error(DiagnosticCode::unexpected_token, t.pos, "materials must be defined before the stack");
                parse_material(doc);
            }
            else if (t.kind == Tok::ident && t.text == "stack")
            {
                if (have_stack)
                {
                    error(DiagnosticCode::duplicate_stack, t.pos, "a document holds exactly one stack");
                    StackDocument scratch = doc;
                    parse_stack_def(scratch);
                }
                else
                {
                    parse_stack_def(doc);
                    have_stack = true;
                }
            }
            else if (t.kind == Tok::ident && t.text == "wavelength")
            {
                error(DiagnosticCode::malformed_header,
                      t.pos, have_header ? "duplicate 'wavelength' header" : "'wavelength' header must come first");
                StackDocument scratch;
                parse_header(scratch);
            }
            else if (t.kind == Tok::rbrace)
            {
                error(DiagnosticCode::unbalanced_braces, t.pos, "unmatched '}'");
                next();
            }
            else
            {
                error(DiagnosticCode::unexpected_token, t.pos,
                      "unexpected " + describe(t) + " at top level");
                next();
                sync_top();
            }
        }
        if (!have_stack)
            error(DiagnosticCode::missing_stack, peek().pos, "document has no 'stack from <medium> to <medium> { ... }'");
        return doc;
    }

private:
    const Token &peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token &next()
    {
        const Token &t = peek();
        if (pos_ + 1 < toks_.size())
            ++pos_;
        return t;
    }
    bool peek_ident(std::string_view word) const { return peek().kind == Tok::ident && peek().text == word; }

    void error(DiagnosticCode code, SourcePos pos, std::string message)
    {
        diags_.push_back({Severity::error, code, pos, std::move(message)});
    }

    void sync_top()
    {
        while (peek().kind != Tok::eof && !is_top_keyword(peek()))
            next();
    }

    // Skip to the next item keyword or brace at the current nesting depth.
    void sync_item()
    {
        while (peek().kind != Tok::eof && !is_item_keyword(peek()) && peek().kind != Tok::rbrace &&
               peek().kind != Tok::lbrace && !is_top_keyword(peek()))
            next();
    }

    bool known_material(const StackDocument &doc, const std::string &name) const
    {
        for (const auto &m : doc.materials)
            if (m.name == name)
                return true;
        return library_.contains(name);
    }

    void parse_header(StackDocument &doc)
    {
        const Token kw = next();
        const Token &num = peek();
        if (num.kind != Tok::number)
        {
            error(DiagnosticCode::malformed_header, num.pos, "expected a wavelength after 'wavelength', got " + describe(num));
            sync_top();
            return;
        }
        next();
        if (num.valid_number)
        {
            if (num.value > 0.0)
                doc.wavelength_nm = num.value;
            else
                error(DiagnosticCode::malformed_header, num.pos, "wavelength must be positive");
        }
        if (!peek_ident("nm"))
        {
            error(DiagnosticCode::malformed_header, peek().pos, "expected unit 'nm' after the wavelength");
            sync_top();
            return;
        }
        next();
        (void)kw;
    }

    // Reads `key = NUMBER`; returns false (with a diagnostic) on a structural error.
    bool parse_assignment(std::string_view key, double &value, bool &valid)
    {
        if (!peek_ident(key))
        {
            error(DiagnosticCode::malformed_material, peek().pos,
                  "expected '" + std::string(key) + "=<number>', got " + describe(peek()));
            return false;
        }
        next();
        if (peek().kind != Tok::equals)
        {
            error(DiagnosticCode::malformed_material, peek().pos, "expected '=' after '" + std::string(key) + "'");
            return false;
        }
        next();
        if (peek().kind != Tok::number)
        {
            error(DiagnosticCode::malformed_material, peek().pos,
                  "expected a number after '" + std::string(key) + "=', got " + describe(peek()));
            return false;
        }
        valid = peek().valid_number;
        value = next().value;
        return true;
    }

    void parse_material(StackDocument &doc)
    {
        const Token kw = next();
        if (peek().kind != Tok::ident || is_top_keyword(peek()))
        {
            error(DiagnosticCode::malformed_material, peek().pos, "expected a material name, got " + describe(peek()));
            sync_top();
            return;
        }
        MaterialDefinition def;
        def.pos = kw.pos;
        const Token name = next();
        def.name = name.text;
        bool n_valid = true, k_valid = true;
        if (!parse_assignment("n", def.n, n_valid))
        {
            sync_top();
            return;
        }
        if (peek_ident("k") && !parse_assignment("k", def.k, k_valid))
        {
            sync_top();
            return;
        }
        if (n_valid && !(def.n > 0.0))
            error(DiagnosticCode::invalid_index, name.pos, "material '" + def.name + "' needs n > 0");
        if (k_valid && def.k < 0.0)
            error(DiagnosticCode::invalid_index, name.pos, "material '" + def.name + "' needs k >= 0");
        for (const auto &m : doc.materials)
            if (m.name == def.name)
            {
                error(DiagnosticCode::duplicate_material, name.pos,
                      "material '" + def.name + "' already defined at line " + std::to_string(m.pos.line));
                return;
            }
        doc.materials.push_back(std::move(def));
    }

    bool expect_medium(const StackDocument &doc, std::string_view keyword, std::string &out)
    {
        if (!peek_ident(keyword))
        {
            error(DiagnosticCode::malformed_stack_header, peek().pos,
                  "expected '" + std::string(keyword) + "' in stack header, got " + describe(peek()));
            return false;
        }
        next();
        if (peek().kind != Tok::ident || is_top_keyword(peek()))
        {
            error(DiagnosticCode::malformed_stack_header, peek().pos,
                  "expected a medium after '" + std::string(keyword) + "', got " + describe(peek()));
            return false;
        }
        const Token &medium = next();
        out = medium.text;
        if (!known_material(doc, out))
            error(DiagnosticCode::unknown_material, medium.pos, "unknown material '" + out + "'");
        return true;
    }

    void parse_stack_def(StackDocument &doc)
    {
        next(); // 'stack'
        bool header_ok = expect_medium(doc, "from", doc.incident) && expect_medium(doc, "to", doc.exit);
        if (!header_ok)
        {
            while (peek().kind != Tok::eof && peek().kind != Tok::lbrace && !is_top_keyword(peek()))
                next();
        }
        if (peek().kind != Tok::lbrace)
        {
            if (header_ok)
                error(DiagnosticCode::malformed_stack_header, peek().pos, "expected '{' after the stack header");
            sync_top();
            return;
        }
        const Token open = next();
        doc.items = parse_items(doc, open);
    }

    std::vector<StackItem> parse_items(const StackDocument &doc, const Token &open)
    {
        std::vector<StackItem> items;
        while (true)
        {
            const Token &t = peek();
            if (t.kind == Tok::rbrace)
            {
                next();
                return items;
            }
            if (t.kind == Tok::eof || is_top_keyword(t))
            {
                error(DiagnosticCode::unbalanced_braces, t.pos,
                      "missing '}' for '{' opened at line " + std::to_string(open.pos.line) + ", column " +
                          std::to_string(open.pos.column));
                return items;
            }
            if (t.kind == Tok::ident && t.text == "layer")
                parse_layer(doc, items);
            else if (t.kind == Tok::ident && t.text == "qw")
                parse_qw(doc, items);
            else if (t.kind == Tok::ident && t.text == "repeat")
                parse_repeat(doc, items);
            else if (t.kind == Tok::ident)
            {
                error(DiagnosticCode::unknown_directive, t.pos,
                      "unknown directive '" + t.text + "' (expected layer, qw or repeat)");
                next();
                sync_item();
            }
            else if (t.kind == Tok::lbrace)
            {
                error(DiagnosticCode::unexpected_token, t.pos, "unexpected '{'");
                const Token inner = next();
                parse_items(doc, inner);
            }
            else
            {
                error(DiagnosticCode::unexpected_token, t.pos, "unexpected " + describe(t) + " in stack body");
                next();
                sync_item();
            }
        }
    }

    bool parse_material_ref(const StackDocument &doc, std::string_view directive, std::string &out)
    {
        if (peek().kind != Tok::ident || is_item_keyword(peek()) || is_top_keyword(peek()))
        {
            error(DiagnosticCode::malformed_layer, peek().pos,
                  "expected a material after '" + std::string(directive) + "', got " + describe(peek()));
            sync_item();
            return false;
        }
        const Token &m = next();
        out = m.text;
        if (!known_material(doc, out))
            error(DiagnosticCode::unknown_material, m.pos, "unknown material '" + out + "'");
        return true;
    }

    void parse_layer(const StackDocument &doc, std::vector<StackItem> &items)
    {
        StackItem item;
        item.kind = StackItem::Kind::layer;
        item.pos = next().pos;
        if (!parse_material_ref(doc, "layer", item.material))
            return;
        if (peek().kind != Tok::number)
        {
            error(DiagnosticCode::malformed_layer, peek().pos, "expected a thickness, got " + describe(peek()));
            sync_item();
            return;
        }
        const Token &num = next();
        item.thickness_nm = num.value;
        if (num.valid_number && !(num.value > 0.0))
            error(DiagnosticCode::non_positive_thickness, num.pos,
                  "layer thickness must be positive, got " + num.text + " nm");
        if (!peek_ident("nm"))
        {
            error(DiagnosticCode::malformed_layer, peek().pos, "expected unit 'nm' after the thickness");
            sync_item();
            return;
        }
        next();
        items.push_back(std::move(item));
    }

    void parse_qw(const StackDocument &doc, std::vector<StackItem> &items)
    {
        StackItem item;
        item.kind = StackItem::Kind::quarter_wave;
        item.pos = next().pos;
        if (!parse_material_ref(doc, "qw", item.material))
            return;
        items.push_back(std::move(item));
    }

    void parse_repeat(const StackDocument &doc, std::vector<StackItem> &items)
    {
        StackItem item;
        item.kind = StackItem::Kind::repeat;
        item.pos = next().pos;
        if (peek().kind != Tok::number)
        {
            error(DiagnosticCode::invalid_repeat_count, peek().pos,
                  "expected a repeat count, got " + describe(peek()));
        }
        else
        {
            const Token &num = next();
            if (num.valid_number)
            {
                if (num.value >= 1.0 && num.value == std::floor(num.value) && num.value <= 1e6 &&
                    num.text.find_first_of(".eE") == std::string::npos)
                    item.count = static_cast<int>(num.value);
                else
                    error(DiagnosticCode::invalid_repeat_count, num.pos,
                          "repeat count must be a positive integer, got " + num.text);
            }
        }
        if (peek().kind != Tok::lbrace)
        {
            error(DiagnosticCode::unexpected_token, peek().pos, "expected '{' after the repeat count");
            sync_item();
            return;
        }
        const Token open = next();
        item.items = parse_items(doc, open);
        items.push_back(std::move(item));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const MaterialLibrary &library_;
    std::vector<Diagnostic> &diags_;
};

std::string number_text(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print_items(std::ostringstream &out, const std::vector<StackItem> &items, int depth)
{
    const std::string indent(static_cast<std::size_t>(4 * depth), ' ');
    for (const auto &item : items)
    {
        switch (item.kind)
        {
        case StackItem::Kind::layer:
            out << indent << "layer " << item.material << ' ' << number_text(item.thickness_nm) << " nm\n";
            break;
        case StackItem::Kind::quarter_wave:
            out << indent << "qw " << item.material << '\n';
            break;
        case StackItem::Kind::repeat:
            out << indent << "repeat " << item.count << " {\n";
            print_items(out, item.items, depth + 1);
            out << indent << "}\n";
            break;
        }
    }
}

void expand(const std::vector<StackItem> &items, const std::map<std::string, Material> &table, double wavelength_nm,
            std::vector<Layer> &out)
{
    for (const auto &item : items)
    {
        switch (item.kind)
        {
        case StackItem::Kind::layer:
            out.push_back(make_layer(table.at(item.material), item.thickness_nm));
            break;
        case StackItem::Kind::quarter_wave: {
            const Material &m = table.at(item.material);
            out.push_back(make_layer(m, quarter_wave_thickness(m, wavelength_nm)));
            break;
        }
        case StackItem::Kind::repeat:
            for (int i = 0; i < item.count; ++i)
                expand(item.items, table, wavelength_nm, out);
            break;
        }
    }
}
} // namespace

const char *to_string(DiagnosticCode code)
{
    switch (code)
    {
    case DiagnosticCode::invalid_character:
        return "invalid-character";
    case DiagnosticCode::malformed_number:
        return "malformed-number";
    case DiagnosticCode::missing_header:
        return "missing-header";
    case DiagnosticCode::malformed_header:
        return "malformed-header";
    case DiagnosticCode::malformed_material:
        return "malformed-material";
    case DiagnosticCode::duplicate_material:
        return "duplicate-material";
    case DiagnosticCode::invalid_index:
        return "invalid-index";
    case DiagnosticCode::missing_stack:
        return "missing-stack";
    case DiagnosticCode::duplicate_stack:
        return "duplicate-stack";
    case DiagnosticCode::malformed_stack_header:
        return "malformed-stack-header";
    case DiagnosticCode::unknown_material:
        return "unknown-material";
    case DiagnosticCode::malformed_layer:
        return "malformed-layer";
    case DiagnosticCode::non_positive_thickness:
        return "non-positive-thickness";
    case DiagnosticCode::invalid_repeat_count:
        return "invalid-repeat-count";
    case DiagnosticCode::unknown_directive:
        return "unknown-directive";
    case DiagnosticCode::unbalanced_braces:
        return "unbalanced-braces";
    case DiagnosticCode::unexpected_token:
        return "unexpected-token";
    }
    return "unknown";
}

const std::vector<DiagnosticCode> &all_diagnostic_codes()
{
    static const std::vector<DiagnosticCode> codes{
        DiagnosticCode::invalid_character,      DiagnosticCode::malformed_number,
        DiagnosticCode::missing_header,         DiagnosticCode::malformed_header,
        DiagnosticCode::malformed_material,     DiagnosticCode::duplicate_material,
        DiagnosticCode::invalid_index,          DiagnosticCode::missing_stack,
        DiagnosticCode::duplicate_stack,        DiagnosticCode::malformed_stack_header,
        DiagnosticCode::unknown_material,       DiagnosticCode::malformed_layer,
        DiagnosticCode::non_positive_thickness, DiagnosticCode::invalid_repeat_count,
        DiagnosticCode::unknown_directive,      DiagnosticCode::unbalanced_braces,
        DiagnosticCode::unexpected_token,
    };
    return codes;
}

std::string format_diagnostic(const Diagnostic &d, std::string_view source_name)
{
    std::ostringstream out;
    if (!source_name.empty())
        out << source_name << ':';
    out << d.pos.line << ':' << d.pos.column << ": " << (d.severity == Severity::error ? "error" : "warning") << ": "
        << d.message << " [" << to_string(d.code) << ']';
    return out.str();
}

ParseResult parse_stack(std::string_view source, const MaterialLibrary &library)
{
    ParseResult result;
    auto tokens = Lexer(source, result.diagnostics).run();
    StackDocument doc = Parser(std::move(tokens), library, result.diagnostics).run();
    std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(), [](const auto &a, const auto &b) {
        return a.pos.line != b.pos.line ? a.pos.line < b.pos.line : a.pos.column < b.pos.column;
    });
    const bool has_error = std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                                       [](const Diagnostic &d) { return d.severity == Severity::error; });
    if (!has_error)
        result.document = std::move(doc);
    return result;
}

std::string print_stack(const StackDocument &document)
{
    std::ostringstream out;
    out << "wavelength " << number_text(document.wavelength_nm) << " nm\n";
    for (const auto &m : document.materials)
    {
        out << "material " << m.name << " n=" << number_text(m.n);
        if (m.k != 0.0)
            out << " k=" << number_text(m.k);
        out << '\n';
    }
    out << "stack from " << document.incident << " to " << document.exit << " {\n";
    print_items(out, document.items, 1);
    out << "}\n";
    return out.str();
}

Stack to_stack(const StackDocument &document, const MaterialLibrary &library)
{
    require(document.wavelength_nm > 0.0, "stack document has no design wavelength");
    std::map<std::string, Material> table;
    for (const auto &name : library.names())
        table.emplace(name, library.at(name));
    for (const auto &m : document.materials)
        table.insert_or_assign(m.name, make_material(m.name, m.n, m.k));
    auto lookup = [&](const std::string &name) -> const Material & {
        const auto it = table.find(name);
        if (it == table.end())
            throw InvalidArgument("unknown material '" + name + "'");
        return it->second;
    };
    Stack stack;
    stack.incident = lookup(document.incident);
    stack.exit = lookup(document.exit);
    std::function<void(const std::vector<StackItem> &)> check = [&](const std::vector<StackItem> &items) {
        for (const auto &item : items)
            if (item.kind == StackItem::Kind::repeat)
                check(item.items);
            else
                lookup(item.material);
    };
    check(document.items);
    expand(document.items, table, document.wavelength_nm, stack.layers);
    return stack;
}

StackDocument from_stack(const Stack &stack, double wavelength_nm)
{
    require(wavelength_nm > 0.0, "wavelength must be positive");
    const auto &library = MaterialLibrary::standard();
    StackDocument doc;
    doc.wavelength_nm = wavelength_nm;
    auto define = [&](const Material &m) {
        if (library.contains(m.name) && library.at(m.name) == m)
            return;
        for (const auto &d : doc.materials)
            if (d.name == m.name)
                return;
        doc.materials.push_back({m.name, m.index.real(), m.index.imag(), {}});
    };
    define(stack.incident);
    for (const auto &layer : stack.layers)
        define(layer.material);
    define(stack.exit);
    doc.incident = stack.incident.name;
    doc.exit = stack.exit.name;
    for (const auto &layer : stack.layers)
    {
        StackItem item;
        item.kind = StackItem::Kind::layer;
        item.material = layer.material.name;
        item.thickness_nm = layer.thickness_nm;
        doc.items.push_back(std::move(item));
    }
    return doc;
}

bool stacks_equivalent(const Stack &a, const Stack &b, double rel_tol)
{
    if (!(a.incident == b.incident) || !(a.exit == b.exit) || a.layers.size() != b.layers.size())
        return false;
    for (std::size_t i = 0; i < a.layers.size(); ++i)
    {
        if (!(a.layers[i].material == b.layers[i].material))
            return false;
        const double ta = a.layers[i].thickness_nm, tb = b.layers[i].thickness_nm;
        if (std::abs(ta - tb) > rel_tol * std::max(std::abs(ta), std::abs(tb)))
            return false;
    }
    return true;
}

Stack load_stack_file(const std::string &path, double *wavelength_nm)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidArgument("cannot open stack file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const ParseResult parsed = parse_stack(buffer.str());
    if (!parsed.ok())
    {
        std::string message;
        for (const auto &d : parsed.diagnostics)
        {
            if (!message.empty())
                message += '\n';
            message += format_diagnostic(d, path);
        }
        throw InvalidArgument(message);
    }
    if (wavelength_nm)
        *wavelength_nm = parsed.document->wavelength_nm;
    return to_stack(*parsed.document);
}
} // namespace fpcav
