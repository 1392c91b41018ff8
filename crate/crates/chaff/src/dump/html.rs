//! Tolerant HTML stripping for post bodies.
//!
//! Dump bodies are stored as HTML. Downstream text statistics need three
//! things from them: the prose with markup removed, the inner text of each
//! code element (kept apart from the prose), and a URL count. Bodies in the
//! wild contain half-broken markup, so the tokenizer here never fails:
//! anything that does not parse as a tag is treated as literal text.

use std::sync::OnceLock;

use regex::Regex;

/// Result of [`strip_html`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StrippedBody {
    /// Body text with markup removed and code-block text excluded. Block
    /// elements are replaced by single newlines; ends are trimmed.
    pub text: String,
    /// Inner text of each `<code>` element, in document order.
    pub code_blocks: Vec<String>,
    /// Hyperlink targets (`href` attributes outside code) plus bare URLs
    /// found in the stripped text.
    pub url_count: usize,
}

/// Tags treated as separators between prose runs.
const BLOCK_TAGS: [&str; 19] = [
    "p", "div", "br", "hr", "li", "ul", "ol", "blockquote", "pre", "h1", "h2", "h3", "h4", "h5",
    "h6", "table", "tr", "td", "th",
];

/// Conservative bare-URL pattern: an explicit scheme, `://`, and a host
/// character. Only the match count is used, so trailing punctuation inside a
/// match is harmless.
fn url_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"\b(?i:https?|ftp)://[^\s<>"'/][^\s<>"']*"#).expect("valid regex")
    })
}

/// Counts bare URLs in plain text.
pub fn count_bare_urls(text: &str) -> usize {
    url_pattern().find_iter(text).count()
}

struct Tag {
    name: String,
    closing: bool,
    href: Option<String>,
}

/// Strips markup from a dump body.
pub fn strip_html(body: &str) -> StrippedBody {
    let mut text = String::new();
    let mut code = String::new();
    let mut code_blocks = Vec::new();
    let mut code_depth = 0usize;
    let mut href_count = 0usize;

    let mut i = 0;
    while i < body.len() {
        let rest = &body[i..];
        let Some(off) = rest.find(['<', '&']) else {
            push_text(&mut text, &mut code, code_depth, rest);
            break;
        };
        if off > 0 {
            push_text(&mut text, &mut code, code_depth, &rest[..off]);
        }
        let at = &rest[off..];
        i += off;
        if at.starts_with('&') {
            match decode_entity(at) {
                Some((ch, len)) => {
                    let mut buf = [0u8; 4];
                    push_text(&mut text, &mut code, code_depth, ch.encode_utf8(&mut buf));
                    i += len;
                }
                None => {
                    push_text(&mut text, &mut code, code_depth, "&");
                    i += 1;
                }
            }
            continue;
        }
        // A '<': comment, declaration, tag, or just a stray character.
        if at.starts_with("<!--") {
            i += at.find("-->").map(|p| p + 3).unwrap_or(at.len());
        } else if let Some(inner) = at.strip_prefix("<![CDATA[") {
            let end = inner.find("]]>").unwrap_or(inner.len());
            push_text(&mut text, &mut code, code_depth, &inner[..end]);
            i += "<![CDATA[".len() + end + inner[end..].find("]]>").map_or(0, |_| 3);
        } else if at.starts_with("<!") || at.starts_with("<?") {
            i += at.find('>').map(|p| p + 1).unwrap_or(at.len());
        } else if let Some((tag, consumed)) = parse_tag(at) {
            match tag.name.as_str() {
                "code" => {
                    if tag.closing {
                        if code_depth > 0 {
                            code_depth -= 1;
                            if code_depth == 0 {
                                code_blocks.push(std::mem::take(&mut code));
                            }
                        }
                    } else {
                        code_depth += 1;
                    }
                }
                "a" if !tag.closing && code_depth == 0 => {
                    if tag.href.is_some_and(|h| !h.is_empty()) {
                        href_count += 1;
                    }
                }
                name if BLOCK_TAGS.contains(&name) => {
                    let sink = if code_depth > 0 { &mut code } else { &mut text };
                    if !sink.is_empty() && !sink.ends_with(char::is_whitespace) {
                        sink.push('\n');
                    }
                }
                _ => {}
            }
            i += consumed;
        } else {
            push_text(&mut text, &mut code, code_depth, "<");
            i += 1;
        }
    }
    // Unterminated code element: close it implicitly.
    if code_depth > 0 && !code.is_empty() {
        code_blocks.push(code);
    }

    let text = text.trim().to_owned();
    let url_count = href_count + count_bare_urls(&text);
    StrippedBody {
        text,
        code_blocks,
        url_count,
    }
}

fn push_text(text: &mut String, code: &mut String, code_depth: usize, s: &str) {
    if code_depth > 0 {
        code.push_str(s);
    } else {
        text.push_str(s);
    }
}

/// Parses `<name ...>` or `</name ...>` starting at a `<`. Returns the tag
/// and the byte length consumed, or `None` when the text is not a tag.
fn parse_tag(s: &str) -> Option<(Tag, usize)> {
    let inner = &s[1..];
    let (closing, inner, head_len) = match inner.strip_prefix('/') {
        Some(rest) => (true, rest, 2),
        None => (false, inner, 1),
    };
    let name_len = inner
        .char_indices()
        .take_while(|(idx, c)| {
            if *idx == 0 {
                c.is_ascii_alphabetic()
            } else {
                c.is_ascii_alphanumeric()
            }
        })
        .count();
    if name_len == 0 {
        return None;
    }
    let name = inner[..name_len].to_ascii_lowercase();
    // Scan to the closing '>' while honoring quoted attribute values.
    let attrs_start = name_len;
    let bytes = inner.as_bytes();
    let mut quote: Option<u8> = None;
    let mut end = None;
    for (k, &b) in bytes.iter().enumerate().skip(attrs_start) {
        match quote {
            Some(q) => {
                if b == q {
                    quote = None;
                }
            }
            None => match b {
                b'"' | b'\'' => quote = Some(b),
                b'>' => {
                    end = Some(k);
                    break;
                }
                // A fresh unquoted '<' means this was never a tag.
                b'<' => return None,
                _ => {}
            },
        }
    }
    let end = end?;
    let href = if !closing && name == "a" {
        find_attr(&inner[attrs_start..end], "href")
    } else {
        None
    };
    Some((
        Tag {
            name,
            closing,
            href,
        },
        head_len + end + 1,
    ))
}

/// Finds one attribute's decoded value inside a tag's attribute span.
fn find_attr(span: &str, wanted: &str) -> Option<String> {
    let bytes = span.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b'/') {
            i += 1;
        }
        let name_start = i;
        while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || matches!(bytes[i], b'-' | b'_' | b':')) {
            i += 1;
        }
        if i == name_start {
            i += 1;
            continue;
        }
        let name = span[name_start..i].to_ascii_lowercase();
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let mut value = String::new();
        if i < bytes.len() && bytes[i] == b'=' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'"' || bytes[i] == b'\'') {
                let q = bytes[i];
                i += 1;
                let vstart = i;
                while i < bytes.len() && bytes[i] != q {
                    i += 1;
                }
                value = decode_entities(&span[vstart..i]);
                i = (i + 1).min(bytes.len());
            } else {
                let vstart = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                value = decode_entities(&span[vstart..i]);
            }
        }
        if name == wanted {
            return Some(value);
        }
    }
    None
}

/// Decodes one entity at the start of `s` (which begins with `&`).
/// Returns the character and the byte length consumed.
fn decode_entity(s: &str) -> Option<(char, usize)> {
    let semi = s[..s.len().min(34)].find(';')?;
    let name = &s[1..semi];
    let ch = match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => ' ',
        _ => {
            let code = if let Some(hex) = name.strip_prefix("#x").or_else(|| name.strip_prefix("#X")) {
                u32::from_str_radix(hex, 16).ok()?
            } else {
                name.strip_prefix('#')?.parse().ok()?
            };
            char::from_u32(code)?
        }
    };
    Some((ch, semi + 1))
}

/// Decodes all entities in a string (attribute values).
fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut i = 0;
    while i < s.len() {
        let rest = &s[i..];
        match rest.find('&') {
            None => {
                out.push_str(rest);
                break;
            }
            Some(off) => {
                out.push_str(&rest[..off]);
                i += off;
                match decode_entity(&s[i..]) {
                    Some((ch, len)) => {
                        out.push(ch);
                        i += len;
                    }
                    None => {
                        out.push('&');
                        i += 1;
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_paragraph_with_code() {
        let out = strip_html("<p>hi</p><pre><code>x=1;</code></pre>");
        assert_eq!(out.text, "hi");
        assert_eq!(out.code_blocks, vec!["x=1;"]);
        assert_eq!(out.url_count, 0);
    }

    #[test]
    fn anchor_counts_as_url() {
        let out = strip_html(r#"<a href="http://a.b">see</a>"#);
        assert_eq!(out.text, "see");
        assert!(out.code_blocks.is_empty());
        assert_eq!(out.url_count, 1);
    }

    #[test]
    fn bare_url_in_text() {
        let out = strip_html("<p>visit http://x.y now</p>");
        assert_eq!(out.text, "visit http://x.y now");
        assert_eq!(out.url_count, 1);
    }

    #[test]
    fn entities_decode() {
        let out = strip_html("<p>a &amp; b &lt;c&gt; &#65; &#x42; &unknown; &amp</p>");
        assert_eq!(out.text, "a & b <c> A B &unknown; &amp");
    }

    #[test]
    fn code_text_never_leaks_into_plain_text() {
        let bodies = [
            "<p>before</p><pre><code>SecretToken</code></pre><p>after</p>",
            "<code>AAA</code> text <code>BBB</code>",
            "<pre><code>nested <b>bold</b> stays code</code></pre>",
        ];
        for body in bodies {
            let out = strip_html(body);
            for block in &out.code_blocks {
                for word in block.split_whitespace() {
                    assert!(
                        !out.text.contains(word),
                        "code token {word:?} leaked into text {:?}",
                        out.text
                    );
                }
            }
        }
    }

    #[test]
    fn broken_markup_is_text() {
        let out = strip_html("5 < 6 and x <y but <b>bold</b>");
        assert_eq!(out.text, "5 < 6 and x <y but bold");
        let out = strip_html("unterminated <a href=\"http://x.y\"");
        assert_eq!(out.text, "unterminated <a href=\"http://x.y\"");
        assert_eq!(out.url_count, 1); // the bare URL inside the literal text
    }

    #[test]
    fn block_tags_separate_prose() {
        let out = strip_html("<p>a</p><p>b</p><ul><li>c</li><li>d</li></ul>");
        assert_eq!(out.text, "a\nb\nc\nd");
    }

    #[test]
    fn anchors_inside_code_do_not_count() {
        let out = strip_html(r#"<code><a href="http://a.b">x</a></code>"#);
        assert_eq!(out.url_count, 0);
        assert_eq!(out.code_blocks, vec!["x"]);
    }

    /// Hand-labeled bare-URL fixture. Each case is (text, expected count)
    /// under the conservative scheme://host rule.
    #[test]
    fn bare_url_hand_fixture() {
        let cases: [(&str, usize); 20] = [
            ("visit http://x.y now", 1),
            ("https://example.com", 1),
            ("ftp://files.example.org/pub", 1),
            ("no urls here", 0),
            ("scheme-less www.example.com does not count", 0),
            ("mailto:someone@example.com does not count", 0),
            ("two http://a.b and http://c.d", 2),
            ("wrapped (http://a.b) in parens", 1),
            ("trailing period http://a.b.", 1),
            ("HTTP://UPPER.CASE", 1),
            ("http:// has no host", 0),
            ("xhttp://not.a.scheme", 0),
            ("file:///etc/passwd is not counted", 0),
            ("adjacent text,http://a.b,comma", 1),
            ("quoted \"http://a.b\" stops at quote", 1),
            ("slashes http://a.b/c/d?e=f#g", 1),
            ("", 0),
            ("http://a.b http://a.b http://a.b", 3),
            ("ssh://host.example not in scheme set", 0),
            ("https://x", 1),
        ];
        for (text, expected) in cases {
            assert_eq!(count_bare_urls(text), expected, "case {text:?}");
        }
    }
}
