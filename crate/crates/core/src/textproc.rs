//! Tokenization and low-level analysis of short social text.
//!
//! Tokenizer contract:
//!
//! * text is split on whitespace into chunks; a chunk that is shaped like an
//!   emoticon is dropped whole;
//! * a url (`http://`, `https://` or a bare `www.` prefix) runs to the end of its
//!   chunk and becomes the placeholder token `url`;
//! * elsewhere a token is a maximal run of letters and digits (combining marks
//!   attach to the preceding letter), with `'` allowed between two word
//!   characters;
//! * `#` or `@` directly before a word character, and not after one, is kept as
//!   a prefix and the run may then also contain `_`;
//! * a single letter that forms the mouth of an emoticon (`:D`, `;p`) is dropped;
//! * tokens are lowercased.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{self, BufRead};
use std::ops::Range;
use std::sync::OnceLock;

use regex::Regex;
use unicode_normalization::char::is_combining_mark;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenizedDocument {
    pub tokens: Vec<String>,
    pub term_freq: BTreeMap<String, u32>,
    /// Unicode scalar count of the original text.
    pub char_length: usize,
    pub word_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TokenKind {
    Word,
    Tagged,
    Url,
}

#[derive(Clone, Debug)]
struct RawToken {
    kind: TokenKind,
    text: String,
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_eye(c: char) -> bool {
    matches!(c, ':' | ';' | '=')
}

/// Whitespace-delimited chunks as char ranges.
fn chunks(chars: &[char]) -> Vec<Range<usize>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in chars.iter().enumerate() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(s..i);
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(s..chars.len());
    }
    out
}

fn starts_with_ci(chars: &[char], prefix: &str) -> bool {
    let mut it = chars.iter();
    prefix
        .chars()
        .all(|p| it.next().map(|c| c.to_ascii_lowercase() == p).unwrap_or(false))
}

/// Start of a url inside the chunk, if any. The url runs to the chunk end.
fn url_start(chars: &[char], chunk: &Range<usize>) -> Option<usize> {
    (chunk.start..chunk.end).find(|&i| {
        let rest = &chars[i..chunk.end];
        let boundary = i == chunk.start || !is_word_char(chars[i - 1]);
        boundary && (starts_with_ci(rest, "http://") || starts_with_ci(rest, "https://") || starts_with_ci(rest, "www."))
    })
}

/// Char ranges covered by urls.
fn url_spans(chars: &[char]) -> Vec<Range<usize>> {
    chunks(chars)
        .into_iter()
        .filter_map(|c| url_start(chars, &c).map(|s| s..c.end))
        .collect()
}

fn in_spans(spans: &[Range<usize>], i: usize) -> bool {
    spans.iter().any(|s| s.contains(&i))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Western,
    Kaomoji,
}

fn shape_patterns() -> &'static [(Regex, Shape); 4] {
    static PATTERNS: OnceLock<[(Regex, Shape); 4]> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        let re = |p: &str| Regex::new(p).expect("static emoticon pattern");
        [
            (re(r#"^[>}\]]?[:;=][-~o^'",*]?[)(\]\[DdPpSsOo/\\|*3@><}{$#xX]+$"#), Shape::Western),
            (re(r#"^[)(\]\[Dd/\\|]+[-~o^']?[:;=][<]?$"#), Shape::Western),
            (re(r"^</?3+$"), Shape::Western),
            (re(r"^[(（][^\s\p{N}]*[_^*;°ω・‿ー][^\s\p{N}]{0,12}[)）]$"), Shape::Kaomoji),
        ]
    })
}

fn kaomoji_bare() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"^[\^\-T>oO;*][_.]?[\^\-T<oO;*]$").expect("static pattern"))
}

fn emoticon_shape(chunk: &str) -> Option<Shape> {
    for (re, shape) in shape_patterns() {
        if re.is_match(chunk) {
            if *shape == Shape::Kaomoji {
                // letters inside a kaomoji are limited to eye/mouth glyphs
                let inner_ok = chunk
                    .chars()
                    .filter(|c| c.is_ascii_alphabetic())
                    .all(|c| matches!(c, 'o' | 'O' | 'T' | 'x' | 'v' | 'u' | 'w'));
                if !inner_ok {
                    continue;
                }
            }
            return Some(*shape);
        }
    }
    if chunk.contains(['_', '^']) && kaomoji_bare().is_match(chunk) {
        return Some(Shape::Kaomoji);
    }
    None
}

/// True if the whole string has the shape of a western emoticon or kaomoji.
pub fn is_emoticon_shaped(chunk: &str) -> bool {
    emoticon_shape(chunk).is_some()
}

fn scan_words(chars: &[char], range: Range<usize>, out: &mut Vec<RawToken>) {
    let mut i = range.start;
    let end = range.end;
    while i < end {
        let c = chars[i];
        let prev_word = i > range.start && is_word_char(chars[i - 1]);
        let tagged = (c == '#' || c == '@') && i + 1 < end && is_word_char(chars[i + 1]) && !prev_word;
        if !(is_word_char(c) || tagged) {
            i += 1;
            continue;
        }
        let start = i;
        if tagged {
            i += 1;
        }
        while i < end {
            let d = chars[i];
            let continues = is_word_char(d)
                || (is_combining_mark(d) && i > start)
                || (tagged && d == '_')
                || (is_apostrophe(d) && i + 1 < end && is_word_char(chars[i + 1]) && is_word_char(chars[i - 1]));
            if !continues {
                break;
            }
            i += 1;
        }
        let run = &chars[start..i];
        // mouth letter of an emoticon glued to text, e.g. "ok:D"
        if !tagged && run.len() == 1 && "DdPpOoSsXx3".contains(run[0]) {
            let mut j = start;
            if j > range.start && matches!(chars[j - 1], '-' | '\'' | '^' | 'o') {
                j -= 1;
            }
            if j > range.start && is_eye(chars[j - 1]) {
                continue;
            }
        }
        let text: String = run
            .iter()
            .map(|&ch| if is_apostrophe(ch) { '\'' } else { ch })
            .flat_map(char::to_lowercase)
            .collect();
        out.push(RawToken {
            kind: if tagged { TokenKind::Tagged } else { TokenKind::Word },
            text,
        });
    }
}

fn scan(text: &str) -> (Vec<char>, Vec<RawToken>) {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    for chunk in chunks(&chars) {
        let s: String = chars[chunk.clone()].iter().collect();
        if is_emoticon_shaped(&s) {
            continue;
        }
        match url_start(&chars, &chunk) {
            Some(u) => {
                scan_words(&chars, chunk.start..u, &mut out);
                out.push(RawToken {
                    kind: TokenKind::Url,
                    text: "url".to_string(),
                });
            }
            None => scan_words(&chars, chunk, &mut out),
        }
    }
    (chars, out)
}

pub fn tokenize(text: &str) -> TokenizedDocument {
    let (chars, raw) = scan(text);
    let tokens: Vec<String> = raw.into_iter().map(|t| t.text).collect();
    let mut term_freq = BTreeMap::new();
    for t in &tokens {
        *term_freq.entry(t.clone()).or_insert(0) += 1;
    }
    TokenizedDocument {
        word_count: tokens.len(),
        tokens,
        term_freq,
        char_length: chars.len(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    Question,
    Exclaim,
    Via,
    Rt,
    At,
    Hash,
    Url,
}

impl Marker {
    pub const ALL: [Marker; 7] = [
        Marker::Question,
        Marker::Exclaim,
        Marker::Via,
        Marker::Rt,
        Marker::At,
        Marker::Hash,
        Marker::Url,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Marker::Question => "?",
            Marker::Exclaim => "!",
            Marker::Via => "via",
            Marker::Rt => "rt",
            Marker::At => "@",
            Marker::Hash => "#",
            Marker::Url => "url",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarkerOccurrence {
    pub marker: Marker,
    pub ordinal: usize,
    /// Position in unicode scalars.
    pub char_index: usize,
}

fn word_at(chars: &[char], i: usize, word: &str) -> bool {
    let n = word.chars().count();
    if i + n > chars.len() || !starts_with_ci(&chars[i..], word) {
        return false;
    }
    let before_ok = i == 0 || !(is_word_char(chars[i - 1]) || chars[i - 1] == '#' || chars[i - 1] == '@');
    let after_ok = i + n == chars.len() || !is_word_char(chars[i + n]);
    before_ok && after_ok
}

/// Marker occurrences ordered by position. Characters inside urls only count
/// towards the url marker.
pub fn extract_markers(text: &str) -> Vec<MarkerOccurrence> {
    let chars: Vec<char> = text.chars().collect();
    let urls = url_spans(&chars);
    let mut found: Vec<(usize, Marker)> = urls.iter().map(|r| (r.start, Marker::Url)).collect();
    for (i, &c) in chars.iter().enumerate() {
        if in_spans(&urls, i) {
            continue;
        }
        let marker = match c {
            '?' => Some(Marker::Question),
            '!' => Some(Marker::Exclaim),
            '@' => Some(Marker::At),
            '#' => Some(Marker::Hash),
            _ if word_at(&chars, i, "via") => Some(Marker::Via),
            _ if word_at(&chars, i, "rt") => Some(Marker::Rt),
            _ => None,
        };
        if let Some(m) = marker {
            found.push((i, m));
        }
    }
    found.sort();
    let mut ordinals: HashMap<Marker, usize> = HashMap::new();
    found
        .into_iter()
        .map(|(char_index, marker)| {
            let ord = ordinals.entry(marker).or_insert(0);
            let occ = MarkerOccurrence {
                marker,
                ordinal: *ord,
                char_index,
            };
            *ord += 1;
            occ
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmoticonKind {
    Western,
    Kaomoji,
    Emoji,
}

impl EmoticonKind {
    fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "western" | "emoticon" => Some(EmoticonKind::Western),
            "kaomoji" => Some(EmoticonKind::Kaomoji),
            "emoji" => Some(EmoticonKind::Emoji),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmoticonHit {
    pub surface: String,
    pub kind: EmoticonKind,
    pub description: Option<String>,
    pub polarity: Polarity,
    pub score: f64,
}

/// Fixed amplitude for emoticons classified by the mouth-character rule.
pub const FALLBACK_AMPLITUDE: f64 = 0.5;

/// Polarity from the mouth character of a western emoticon. The mouth is the
/// character farthest from the eyes; for reversed emoticons (`(:`) the
/// bracket direction is mirrored.
pub fn mouth_polarity(surface: &str) -> Polarity {
    let chars: Vec<char> = surface.chars().collect();
    let Some(eye) = chars.iter().position(|&c| is_eye(c)) else {
        return Polarity::Unknown;
    };
    let reversed = eye + 1 >= chars.len() || (eye == chars.len() - 2 && chars[chars.len() - 1] == '<');
    if reversed && eye > 0 {
        match chars[0] {
            '(' | '[' => Polarity::Positive,
            ')' | ']' | 'D' | '/' | '\\' => Polarity::Negative,
            _ => Polarity::Unknown,
        }
    } else {
        match chars[chars.len() - 1] {
            ')' | ']' | 'D' | 'd' => Polarity::Positive,
            '(' | '[' | '/' | '\\' => Polarity::Negative,
            _ => Polarity::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct CatalogEntry {
    kind: EmoticonKind,
    description: String,
    polarity: Polarity,
}

/// Western, kaomoji and emoji description tables.
#[derive(Clone, Debug, Default)]
pub struct EmoticonCatalogs {
    entries: HashMap<String, CatalogEntry>,
    first_chars: HashSet<char>,
    max_len: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogLoad {
    pub loaded: usize,
    pub skipped: usize,
}

fn decode_surface(raw: &str) -> Option<String> {
    let raw = raw.trim_matches(|c| c == '\r' || c == '\n');
    if raw.starts_with("U+") || raw.starts_with("u+") {
        raw.split_whitespace()
            .map(|cp| {
                let hex = cp.trim_start_matches("U+").trim_start_matches("u+");
                u32::from_str_radix(hex, 16).ok().and_then(char::from_u32)
            })
            .collect()
    } else if raw.is_empty() {
        None
    } else {
        Some(raw.to_string())
    }
}

impl EmoticonCatalogs {
    pub fn new() -> Self {
        Self::default()
    }

    /// The catalogs shipped with the crate.
    pub fn bundled() -> Self {
        let mut c = Self::new();
        c.extend_from_reader(include_str!("../data/emoticons.tsv").as_bytes())
            .expect("bundled catalog");
        c.extend_from_reader(include_str!("../data/emoji.tsv").as_bytes())
            .expect("bundled catalog");
        c
    }

    /// Adds `surface<TAB>kind<TAB>description` rows. Emoji surfaces may be
    /// written literally or as `U+XXXX` sequences. Lines starting with `#` are
    /// comments; malformed rows are skipped and counted.
    pub fn extend_from_reader<R: BufRead>(&mut self, reader: R) -> io::Result<CatalogLoad> {
        let mut stats = CatalogLoad::default();
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let parsed = (|| {
                let surface = decode_surface(cols.next()?)?;
                let kind = EmoticonKind::parse(cols.next()?)?;
                let description = cols.next()?.trim().to_lowercase();
                Some((surface, kind, description))
            })();
            match parsed {
                Some((surface, kind, description)) => {
                    self.insert(surface, kind, description);
                    stats.loaded += 1;
                }
                None => stats.skipped += 1,
            }
        }
        Ok(stats)
    }

    pub fn insert(&mut self, surface: String, kind: EmoticonKind, description: String) {
        let polarity = match kind {
            EmoticonKind::Western => match mouth_polarity(&surface) {
                Polarity::Unknown => Polarity::Neutral,
                p => p,
            },
            _ => Polarity::Neutral,
        };
        let first = surface.chars().next().expect("non-empty surface");
        self.first_chars.insert(first);
        self.max_len = self.max_len.max(surface.chars().count());
        self.entries.insert(
            surface,
            CatalogEntry {
                kind,
                description,
                polarity,
            },
        );
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn longest_match(&self, chars: &[char], i: usize) -> Option<(usize, &str, &CatalogEntry)> {
        if !self.first_chars.contains(&chars[i]) {
            return None;
        }
        let max = self.max_len.min(chars.len() - i);
        let mut buf: String = chars[i..i + max].iter().collect();
        for len in (1..=max).rev() {
            if len < max {
                buf.pop();
            }
            if let Some((surface, entry)) = self.entries.get_key_value(buf.as_str()) {
                let first_alnum = chars[i].is_alphanumeric();
                let last_alnum = chars[i + len - 1].is_alphanumeric();
                let before_ok = !first_alnum || i == 0 || !chars[i - 1].is_alphanumeric();
                let after_ok = !last_alnum || i + len == chars.len() || !chars[i + len].is_alphanumeric();
                if before_ok && after_ok {
                    return Some((len, surface.as_str(), entry));
                }
            }
        }
        None
    }
}

fn is_emoji_char(c: char) -> bool {
    matches!(c as u32,
        0x1F300..=0x1F5FF | 0x1F600..=0x1F64F | 0x1F680..=0x1F6FF | 0x1F900..=0x1F9FF
        | 0x1FA70..=0x1FAFF | 0x2600..=0x26FF | 0x2700..=0x27BF)
}

/// Catalog hits (longest match first), then mouth-rule fallback for
/// unmatched emoticon-shaped chunks, then uncatalogued emoji characters.
pub fn detect_emoticons(text: &str, catalogs: &EmoticonCatalogs) -> Vec<EmoticonHit> {
    let chars: Vec<char> = text.chars().collect();
    let urls = url_spans(&chars);
    let mut covered = vec![false; chars.len()];
    let mut hits: Vec<(usize, EmoticonHit)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if in_spans(&urls, i) {
            i += 1;
            continue;
        }
        if let Some((len, surface, entry)) = catalogs.longest_match(&chars, i) {
            hits.push((
                i,
                EmoticonHit {
                    surface: surface.to_string(),
                    kind: entry.kind,
                    description: Some(entry.description.clone()),
                    polarity: entry.polarity,
                    score: 0.0,
                },
            ));
            covered[i..i + len].iter_mut().for_each(|c| *c = true);
            i += len;
            continue;
        }
        i += 1;
    }
    for chunk in chunks(&chars) {
        if chunk.clone().any(|j| covered[j]) {
            continue;
        }
        let s: String = chars[chunk.clone()].iter().collect();
        if let Some(shape) = emoticon_shape(&s) {
            let (kind, polarity) = match shape {
                Shape::Western => (EmoticonKind::Western, mouth_polarity(&s)),
                Shape::Kaomoji => (EmoticonKind::Kaomoji, Polarity::Unknown),
            };
            let score = if polarity == Polarity::Unknown { 0.0 } else { FALLBACK_AMPLITUDE };
            covered[chunk.clone()].iter_mut().for_each(|c| *c = true);
            hits.push((
                chunk.start,
                EmoticonHit {
                    surface: s,
                    kind,
                    description: None,
                    polarity,
                    score,
                },
            ));
        }
    }
    for (j, &c) in chars.iter().enumerate() {
        if !covered[j] && is_emoji_char(c) {
            hits.push((
                j,
                EmoticonHit {
                    surface: c.to_string(),
                    kind: EmoticonKind::Emoji,
                    description: None,
                    polarity: Polarity::Unknown,
                    score: 0.0,
                },
            ));
        }
    }
    hits.sort_by_key(|(pos, _)| *pos);
    hits.into_iter().map(|(_, h)| h).collect()
}

/// Dale-Chall easy-word list.
#[derive(Clone, Debug, Default)]
pub struct EasyWords(HashSet<String>);

impl EasyWords {
    pub fn bundled() -> Self {
        Self::from_reader(include_str!("../data/easy_words.txt").as_bytes()).expect("bundled list")
    }

    /// One word per line; `#` starts a comment.
    pub fn from_reader<R: BufRead>(reader: R) -> io::Result<Self> {
        let mut set = HashSet::new();
        for line in reader.lines() {
            let line = line?;
            let word = line.split('#').next().unwrap_or("").trim().to_lowercase();
            if !word.is_empty() {
                set.insert(word);
            }
        }
        Ok(EasyWords(set))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for EasyWords {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        EasyWords(iter.into_iter().map(|s| s.into().to_lowercase()).collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReadabilityCounts {
    pub sentences: usize,
    pub words: usize,
    pub difficult_words: usize,
    pub syllables: usize,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y' | 'à'..='æ' | 'è'..='ï' | 'ò'..='ö' | 'ù'..='ü')
}

/// Vowel-group heuristic: maximal vowel runs, minus a silent trailing `e`
/// when that leaves at least one, never below 1.
pub fn syllables(word: &str) -> usize {
    let lower = word.to_lowercase();
    let mut count = 0;
    let mut in_run = false;
    for c in lower.chars() {
        let v = is_vowel(c);
        if v && !in_run {
            count += 1;
        }
        in_run = v;
    }
    if lower.ends_with('e') && count > 1 {
        count -= 1;
    }
    count.max(1)
}

pub fn readability_counts(text: &str, easy_words: &EasyWords) -> ReadabilityCounts {
    let (chars, raw) = scan(text);
    let words: Vec<&str> = raw
        .iter()
        .filter(|t| t.kind == TokenKind::Word && t.text.chars().all(|c| c.is_alphabetic() || c == '\'' || is_combining_mark(c)))
        .map(|t| t.text.as_str())
        .collect();
    let urls = url_spans(&chars);
    let mut sentences = 0;
    let mut has_letter = false;
    for (i, &c) in chars.iter().enumerate() {
        if in_spans(&urls, i) {
            continue;
        }
        if matches!(c, '.' | '!' | '?') {
            if has_letter {
                sentences += 1;
            }
            has_letter = false;
        } else if c.is_alphabetic() {
            has_letter = true;
        }
    }
    if has_letter {
        sentences += 1;
    }
    ReadabilityCounts {
        sentences: sentences.max(1),
        words: words.len(),
        difficult_words: words.iter().filter(|w| !easy_words.contains(w)).count(),
        syllables: words.iter().map(|w| syllables(w)).sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_strips_punctuation_and_lowercases() {
        let d = tokenize("Help my MAIL!");
        assert_eq!(d.tokens, ["help", "my", "mail"]);
        assert_eq!(d.word_count, 3);
        assert_eq!(d.char_length, 13);
    }

    #[test]
    fn tokenize_keeps_handles_and_apostrophes() {
        assert_eq!(tokenize("@YahooCare can't login").tokens, ["@yahoocare", "can't", "login"]);
        assert_eq!(tokenize("#Fail_Whale!! a#b").tokens, ["#fail_whale", "a", "b"]);
        assert_eq!(tokenize("'quoted' don’t").tokens, ["quoted", "don't"]);
    }

    #[test]
    fn tokenize_empty() {
        let d = tokenize("");
        assert!(d.tokens.is_empty());
        assert_eq!(d.char_length, 0);
        assert_eq!(d.word_count, 0);
    }

    #[test]
    fn tokenize_urls_and_emoticons() {
        let d = tokenize("see https://t.co/AbC and www.x.com/y :) ok:D (*_*) :-P");
        assert_eq!(d.tokens, ["see", "url", "and", "url", "ok"]);
        assert_eq!(d.term_freq["url"], 2);
    }

    #[test]
    fn tokenize_unicode() {
        assert_eq!(tokenize("Ünïcödé straße 東京").tokens, ["ünïcödé", "straße", "東京"]);
    }

    #[test]
    fn markers_in_order() {
        let m = extract_markers("rt @a: nice via @b");
        let got: Vec<(Marker, usize)> = m.iter().map(|o| (o.marker, o.ordinal)).collect();
        assert_eq!(
            got,
            [(Marker::Rt, 0), (Marker::At, 0), (Marker::Via, 0), (Marker::At, 1)]
        );
        assert_eq!(m[1].char_index, 3);
    }

    #[test]
    fn markers_consecutive_ordinals() {
        let m = extract_markers("really??");
        assert_eq!(m.len(), 2);
        assert_eq!((m[0].ordinal, m[0].char_index), (0, 6));
        assert_eq!((m[1].ordinal, m[1].char_index), (1, 7));
    }

    #[test]
    fn markers_url() {
        let m = extract_markers("see https://x.co/?q=1#frag");
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].marker, Marker::Url);
        assert_eq!(m[0].char_index, 4);
        assert_eq!(extract_markers("WWW.example.com")[0].marker, Marker::Url);
    }

    #[test]
    fn markers_words_need_boundaries() {
        assert!(extract_markers("trivia art #rt start").iter().all(|o| o.marker == Marker::Hash));
        assert_eq!(extract_markers("RT this").first().map(|o| o.marker), Some(Marker::Rt));
    }

    fn catalogs() -> EmoticonCatalogs {
        let mut c = EmoticonCatalogs::new();
        let rows = "# test\n:(\twestern\tsad face\n:)\twestern\tsmiley face\n(*_*)\tkaomoji\tstar struck\nU+1F600\temoji\tgrinning face\nbad row\n";
        let stats = c.extend_from_reader(rows.as_bytes()).unwrap();
        assert_eq!(stats, CatalogLoad { loaded: 4, skipped: 1 });
        c
    }

    #[test]
    fn emoticon_catalog_hit() {
        let hits = detect_emoticons("why :(", &catalogs());
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].kind, EmoticonKind::Western);
        assert_eq!(hits[0].polarity, Polarity::Negative);
        assert_eq!(hits[0].description.as_deref(), Some("sad face"));
    }

    #[test]
    fn kaomoji_catalog_hit() {
        let hits = detect_emoticons("wow (*_*)", &catalogs());
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].kind, EmoticonKind::Kaomoji);
        assert!(hits[0].description.is_some());
    }

    #[test]
    fn emoticon_fallback() {
        let hits = detect_emoticons("meh :^(", &catalogs());
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].description, None);
        assert_eq!(hits[0].polarity, Polarity::Negative);
        assert_eq!(hits[0].score, FALLBACK_AMPLITUDE);
        assert_eq!(detect_emoticons(":-]", &catalogs())[0].polarity, Polarity::Positive);
        assert_eq!(detect_emoticons("(:", &catalogs())[0].polarity, Polarity::Positive);
        assert_eq!(detect_emoticons(":P", &catalogs())[0].polarity, Polarity::Unknown);
    }

    #[test]
    fn emoji_lookup_and_unknown() {
        let hits = detect_emoticons("yay 😀 🦄", &catalogs());
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].description.as_deref(), Some("grinning face"));
        assert_eq!(hits[1].polarity, Polarity::Unknown);
        assert_eq!(hits[1].kind, EmoticonKind::Emoji);
    }

    #[test]
    fn emoticons_ignore_urls_and_times() {
        let mut c = catalogs();
        c.insert(":/".into(), EmoticonKind::Western, "skeptical".into());
        c.insert(":3".into(), EmoticonKind::Western, "cat face".into());
        assert!(detect_emoticons("http://x.co at 10:30", &c).is_empty());
    }

    #[test]
    fn bundled_catalogs_load() {
        let c = EmoticonCatalogs::bundled();
        assert!(c.len() > 100);
        let hits = detect_emoticons(":( 😂", &c);
        assert_eq!(hits.len(), 2);
        assert!(hits.iter().all(|h| h.description.is_some()));
    }

    #[test]
    fn shapes() {
        for s in [":)", ":-(", ";P", "D:", "<3", ">:(", "=]", "(^_^)", "^_^", "(T_T)"] {
            assert!(is_emoticon_shaped(s), "{s}");
        }
        for s in ["hello", "(hello)", "10:30", "a:b", "(1)", "?!", "@me", "url"] {
            assert!(!is_emoticon_shaped(s), "{s}");
        }
    }

    #[test]
    fn readability_sentences_and_words() {
        let easy: EasyWords = ["i", "ran", "hid"].into_iter().collect();
        let c = readability_counts("I ran. I hid!", &easy);
        assert_eq!((c.sentences, c.words, c.difficult_words), (2, 4, 0));
        assert_eq!(readability_counts("", &easy).sentences, 1);
        assert_eq!(readability_counts("see www.a.b.c now", &easy).sentences, 1);
    }

    #[test]
    fn syllable_heuristic() {
        assert_eq!(syllables("cake"), 1);
        assert_eq!(syllables("the"), 1);
        assert_eq!(syllables("hmm"), 1);
        assert_eq!(syllables("reading"), 2);
        assert_eq!(syllables("xylophone"), 3);
        assert_eq!(syllables("beautiful"), 3);
    }

    #[test]
    fn difficult_word_is_set_miss() {
        let easy: EasyWords = ["the", "a"].into_iter().collect();
        let c = readability_counts("the xylophone", &easy);
        assert_eq!(c.words, 2);
        assert_eq!(c.difficult_words, 1);
        assert_eq!(c.syllables, 1 + 3);
    }

    #[test]
    fn easy_words_comments() {
        let e = EasyWords::from_reader("# header\nThe\n  a # article\n\n".as_bytes()).unwrap();
        assert_eq!(e.len(), 2);
        assert!(e.contains("the"));
        assert!(EasyWords::bundled().len() >= 900);
    }
}
