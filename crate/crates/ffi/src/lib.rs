//! C ABI over `onto-core`.
//!
//! Conventions:
//! - Every fallible call returns an [`OntoStatus`]; results come back through
//!   out-pointers that are only written on `ONTO_STATUS_OK`.
//! - On failure a message is kept per thread; read it with
//!   [`onto_last_error_message`].
//! - Strings crossing the boundary are NUL-terminated UTF-8. Strings returned
//!   by this library are owned by the caller and released with
//!   [`onto_string_free`]; handles with their own `_free` function.
//! - Panics never unwind into C; they surface as `ONTO_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use onto_core::baseline::{object_to_json, to_json, JsonStyle};
use onto_core::bench::records_from_json;
use onto_core::tokenizer::{load_model, TokenizerError, TokenizerModel};
use onto_core::{dumps, dumps_records, loads, records_of, ModelError, ParseErrorKind, Record, SerializeError, Value};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OntoStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// ONTO text failed to parse; details in the `OntoParseError` out-param.
    ParseError = 3,
    /// Value cannot be written in the requested format.
    SerializeError = 4,
    /// JSON input is malformed or not an array of homogeneous objects.
    JsonError = 5,
    /// Rank file is malformed.
    RankFileError = 6,
    IoError = 7,
    /// Index or entity name does not exist.
    NotFound = 8,
    /// Output contains a NUL byte and cannot be returned as a C string.
    InteriorNul = 9,
    Panic = 10,
    /// Entity name is not an identifier.
    InvalidName = 11,
}

/// Mirror of the parser's error kinds. `None` when no parse error occurred.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OntoParseErrorKind {
    None = 0,
    BadIndentation,
    BadEntityHeader,
    BadFieldName,
    CountMismatch,
    UnterminatedBacktick,
    TabCharacter,
    DuplicateField,
    EmptyGroup,
    StrayContent,
}

impl From<ParseErrorKind> for OntoParseErrorKind {
    fn from(k: ParseErrorKind) -> Self {
        match k {
            ParseErrorKind::BadIndentation => Self::BadIndentation,
            ParseErrorKind::BadEntityHeader => Self::BadEntityHeader,
            ParseErrorKind::BadFieldName => Self::BadFieldName,
            ParseErrorKind::CountMismatch => Self::CountMismatch,
            ParseErrorKind::UnterminatedBacktick => Self::UnterminatedBacktick,
            ParseErrorKind::TabCharacter => Self::TabCharacter,
            ParseErrorKind::DuplicateField => Self::DuplicateField,
            ParseErrorKind::EmptyGroup => Self::EmptyGroup,
            ParseErrorKind::StrayContent => Self::StrayContent,
        }
    }
}

/// Position of a parse failure. Line and column are 1-based.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OntoParseError {
    pub kind: OntoParseErrorKind,
    pub line: usize,
    pub column: usize,
}

/// Whitespace layout for JSON output.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OntoJsonStyle {
    Compact = 0,
    /// `", "` and `": "` separators on one line.
    Spaced = 1,
    /// One member per line; width given separately.
    Indented = 2,
}

/// Parsed ONTO document (opaque).
pub struct OntoDocument {
    inner: onto_core::OntoDocument,
}

/// Loaded cl100k_base vocabulary (opaque). Safe to share across threads.
pub struct OntoTokenizer {
    inner: TokenizerModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', "\\0");
    let c = CString::new(message).expect("NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(OntoStatus, String);

type FfiResult = Result<(), Failure>;

fn fail<T>(status: OntoStatus, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, message.into()))
}

/// Runs `f`, converting failures and panics into a status code.
fn guard(f: impl FnOnce() -> FfiResult) -> OntoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OntoStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(panic) => {
            let what = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {what}"));
            OntoStatus::Panic
        }
    }
}

unsafe fn text_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return fail(OntoStatus::NullArgument, format!("`{name}` is NULL"));
    }
    CStr::from_ptr(p)
        .to_str()
        .or_else(|e| fail(OntoStatus::InvalidUtf8, format!("`{name}` is not UTF-8: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .map_or_else(|| fail(OntoStatus::NullArgument, format!("`{name}` is NULL")), Ok)
}

fn out_arg<T>(p: *mut T, name: &str) -> FfiResult {
    if p.is_null() {
        return fail(OntoStatus::NullArgument, format!("`{name}` is NULL"));
    }
    Ok(())
}

fn to_c(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .or_else(|_| fail(OntoStatus::InteriorNul, "output contains a NUL byte"))
}

fn json_style(style: OntoJsonStyle, indent: usize) -> JsonStyle {
    match style {
        OntoJsonStyle::Compact => JsonStyle::Compact,
        OntoJsonStyle::Spaced => JsonStyle::Spaced,
        OntoJsonStyle::Indented => JsonStyle::Indented(indent),
    }
}

/// Message for the last failed call on this thread, or NULL if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn onto_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn onto_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn onto_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses ONTO text. On `ONTO_STATUS_PARSE_ERROR`, `error` (if non-NULL)
/// receives the kind and position; otherwise its kind is set to none.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` and `error` must be valid
/// for writes or NULL (`out` is required).
#[no_mangle]
pub unsafe extern "C" fn onto_parse(
    text: *const c_char,
    out: *mut *mut OntoDocument,
    error: *mut OntoParseError,
) -> OntoStatus {
    if !error.is_null() {
        *error = OntoParseError {
            kind: OntoParseErrorKind::None,
            line: 0,
            column: 0,
        };
    }
    guard(|| {
        out_arg(out, "out")?;
        let text = text_arg(text, "text")?;
        match loads(text) {
            Ok(doc) => {
                *out = Box::into_raw(Box::new(OntoDocument { inner: doc }));
                Ok(())
            }
            Err(e) => {
                if !error.is_null() {
                    *error = OntoParseError {
                        kind: e.kind.into(),
                        line: e.line,
                        column: e.column,
                    };
                }
                fail(OntoStatus::ParseError, e.to_string())
            }
        }
    })
}

/// # Safety
/// `doc` must come from [`onto_parse`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn onto_document_free(doc: *mut OntoDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Number of entities in the document; 0 for NULL.
///
/// # Safety
/// `doc` must be a live document or NULL.
#[no_mangle]
pub unsafe extern "C" fn onto_document_entity_count(doc: *const OntoDocument) -> usize {
    doc.as_ref().map_or(0, |d| d.inner.entities().len())
}

/// Name (caller frees) and declared record count of entity `index`.
///
/// # Safety
/// `doc` must be a live document; `name` and `count` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn onto_document_entity(
    doc: *const OntoDocument,
    index: usize,
    name: *mut *mut c_char,
    count: *mut usize,
) -> OntoStatus {
    guard(|| {
        let doc = ref_arg(doc, "doc")?;
        out_arg(name, "name")?;
        out_arg(count, "count")?;
        let Some(block) = doc.inner.entities().get(index) else {
            return fail(OntoStatus::NotFound, format!("no entity at index {index}"));
        };
        *name = to_c(block.name().to_owned())?;
        *count = block.count();
        Ok(())
    })
}

/// Canonical ONTO text of the document.
///
/// # Safety
/// `doc` must be a live document; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn onto_document_dumps(doc: *const OntoDocument, out: *mut *mut c_char) -> OntoStatus {
    guard(|| {
        let doc = ref_arg(doc, "doc")?;
        out_arg(out, "out")?;
        let text = dumps(&doc.inner).or_else(|e| fail(OntoStatus::SerializeError, e.to_string()))?;
        *out = to_c(text)?;
        Ok(())
    })
}

/// JSON rendering. With `entity` set, that entity's records as an array;
/// with NULL and one entity, its array; with several, an object keyed by
/// entity name. `indent` applies to `ONTO_JSON_STYLE_INDENTED` only.
///
/// # Safety
/// `doc` must be a live document; `entity` NULL or a C string; `out` valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn onto_document_to_json(
    doc: *const OntoDocument,
    entity: *const c_char,
    style: OntoJsonStyle,
    indent: usize,
    out: *mut *mut c_char,
) -> OntoStatus {
    guard(|| {
        let doc = ref_arg(doc, "doc")?;
        out_arg(out, "out")?;
        let style = json_style(style, indent);
        let blocks: Vec<_> = if entity.is_null() {
            doc.inner.entities().iter().collect()
        } else {
            let name = text_arg(entity, "entity")?;
            match doc.inner.entity(name) {
                Some(b) => vec![b],
                None => return fail(OntoStatus::NotFound, format!("no entity named `{name}`")),
            }
        };
        let text = if let [block] = blocks.as_slice() {
            to_json(&records_of(block), style)
        } else {
            let mut wrapper = Record::new();
            for block in blocks {
                let rows = records_of(block).into_iter().map(Value::Record).collect();
                wrapper
                    .push(block.name(), Value::Array(rows))
                    .or_else(|e| fail(OntoStatus::SerializeError, e.to_string()))?;
            }
            object_to_json(&wrapper, style)
        };
        *out = to_c(text)?;
        Ok(())
    })
}

/// Converts a JSON array of homogeneous objects to ONTO under `entity`.
///
/// # Safety
/// `json` and `entity` must be C strings; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn onto_json_to_onto(
    json: *const c_char,
    entity: *const c_char,
    out: *mut *mut c_char,
) -> OntoStatus {
    guard(|| {
        out_arg(out, "out")?;
        let json = text_arg(json, "json")?;
        let entity = text_arg(entity, "entity")?;
        let records = records_from_json(json).or_else(|e| fail(OntoStatus::JsonError, e.to_string()))?;
        let text = dumps_records(entity, &records).or_else(|e| {
            let status = match e {
                SerializeError::Model(ModelError::InvalidName { .. }) => OntoStatus::InvalidName,
                SerializeError::Model(_) => OntoStatus::JsonError,
                SerializeError::UnrepresentableValue { .. } => OntoStatus::SerializeError,
            };
            fail(status, e.to_string())
        })?;
        *out = to_c(text)?;
        Ok(())
    })
}

/// Loads a `<base64 token> <rank>` rank file (cl100k_base).
///
/// # Safety
/// `path` must be a C string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn onto_tokenizer_load(path: *const c_char, out: *mut *mut OntoTokenizer) -> OntoStatus {
    guard(|| {
        out_arg(out, "out")?;
        let path = text_arg(path, "path")?;
        let model = load_model(path).or_else(|e| {
            let status = match e {
                TokenizerError::Io { .. } => OntoStatus::IoError,
                _ => OntoStatus::RankFileError,
            };
            fail(status, e.to_string())
        })?;
        *out = Box::into_raw(Box::new(OntoTokenizer { inner: model }));
        Ok(())
    })
}

/// # Safety
/// `tok` must come from [`onto_tokenizer_load`] and not have been freed.
/// NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn onto_tokenizer_free(tok: *mut OntoTokenizer) {
    if !tok.is_null() {
        drop(Box::from_raw(tok));
    }
}

/// Token count of `text`. No special tokens are recognised.
///
/// # Safety
/// `tok` must be a live tokenizer; `text` a C string; `count` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn onto_tokenizer_count(
    tok: *const OntoTokenizer,
    text: *const c_char,
    count: *mut usize,
) -> OntoStatus {
    guard(|| {
        let tok = ref_arg(tok, "tok")?;
        out_arg(count, "count")?;
        let text = text_arg(text, "text")?;
        *count = tok.inner.count_tokens(text);
        Ok(())
    })
}

/// Token ids of `text` written to `ids` (capacity `cap`); `len` receives the
/// full count. Call with `ids = NULL, cap = 0` to size the buffer; a short
/// buffer is filled as far as it goes.
///
/// # Safety
/// `tok` live; `text` a C string; `ids` valid for `cap` writes or NULL;
/// `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn onto_tokenizer_encode(
    tok: *const OntoTokenizer,
    text: *const c_char,
    ids: *mut u32,
    cap: usize,
    len: *mut usize,
) -> OntoStatus {
    guard(|| {
        let tok = ref_arg(tok, "tok")?;
        out_arg(len, "len")?;
        let text = text_arg(text, "text")?;
        let tokens = tok.inner.encode_with_spans(text);
        if !ids.is_null() {
            for (i, t) in tokens.iter().take(cap).enumerate() {
                *ids.add(i) = t.id;
            }
        }
        *len = tokens.len();
        Ok(())
    })
}
