#ifndef ONTO_H
#define ONTO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum OntoStatus {
  ONTO_STATUS_OK = 0,
  ONTO_STATUS_NULL_ARGUMENT = 1,
  ONTO_STATUS_INVALID_UTF8 = 2,
  // ONTO text failed to parse; details in the `OntoParseError` out-param.
  ONTO_STATUS_PARSE_ERROR = 3,
  // Value cannot be written in the requested format.
  ONTO_STATUS_SERIALIZE_ERROR = 4,
  // JSON input is malformed or not an array of homogeneous objects.
  ONTO_STATUS_JSON_ERROR = 5,
  // Rank file is malformed.
  ONTO_STATUS_RANK_FILE_ERROR = 6,
  ONTO_STATUS_IO_ERROR = 7,
  // Index or entity name does not exist.
  ONTO_STATUS_NOT_FOUND = 8,
  // Output contains a NUL byte and cannot be returned as a C string.
  ONTO_STATUS_INTERIOR_NUL = 9,
  ONTO_STATUS_PANIC = 10,
  // Entity name is not an identifier.
  ONTO_STATUS_INVALID_NAME = 11,
} OntoStatus;

// Mirror of the parser's error kinds. `None` when no parse error occurred.
typedef enum OntoParseErrorKind {
  ONTO_PARSE_ERROR_KIND_NONE = 0,
  ONTO_PARSE_ERROR_KIND_BAD_INDENTATION,
  ONTO_PARSE_ERROR_KIND_BAD_ENTITY_HEADER,
  ONTO_PARSE_ERROR_KIND_BAD_FIELD_NAME,
  ONTO_PARSE_ERROR_KIND_COUNT_MISMATCH,
  ONTO_PARSE_ERROR_KIND_UNTERMINATED_BACKTICK,
  ONTO_PARSE_ERROR_KIND_TAB_CHARACTER,
  ONTO_PARSE_ERROR_KIND_DUPLICATE_FIELD,
  ONTO_PARSE_ERROR_KIND_EMPTY_GROUP,
  ONTO_PARSE_ERROR_KIND_STRAY_CONTENT,
} OntoParseErrorKind;

// Whitespace layout for JSON output.
typedef enum OntoJsonStyle {
  ONTO_JSON_STYLE_COMPACT = 0,
  // `", "` and `": "` separators on one line.
  ONTO_JSON_STYLE_SPACED = 1,
  // One member per line; width given separately.
  ONTO_JSON_STYLE_INDENTED = 2,
} OntoJsonStyle;

// Parsed ONTO document (opaque).
typedef struct OntoDocument OntoDocument;

// Loaded cl100k_base vocabulary (opaque). Safe to share across threads.
typedef struct OntoTokenizer OntoTokenizer;

// Position of a parse failure. Line and column are 1-based.
typedef struct OntoParseError {
  enum OntoParseErrorKind kind;
  size_t line;
  size_t column;
} OntoParseError;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL if none.
// Valid until the next failing call on the same thread.
const char *onto_last_error_message(void);

// Library version, static storage.
const char *onto_version(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void onto_string_free(char *s);

// Parses ONTO text. On `ONTO_STATUS_PARSE_ERROR`, `error` (if non-NULL)
// receives the kind and position; otherwise its kind is set to none.
//
// # Safety
// `text` must be a NUL-terminated string; `out` and `error` must be valid
// for writes or NULL (`out` is required).
enum OntoStatus onto_parse(const char *text,
                           struct OntoDocument **out,
                           struct OntoParseError *error);

// # Safety
// `doc` must come from [`onto_parse`] and not have been freed. NULL is ignored.
void onto_document_free(struct OntoDocument *doc);

// Number of entities in the document; 0 for NULL.
//
// # Safety
// `doc` must be a live document or NULL.
size_t onto_document_entity_count(const struct OntoDocument *doc);

// Name (caller frees) and declared record count of entity `index`.
//
// # Safety
// `doc` must be a live document; `name` and `count` valid for writes.
enum OntoStatus onto_document_entity(const struct OntoDocument *doc,
                                     size_t index,
                                     char **name,
                                     size_t *count);

// Canonical ONTO text of the document.
//
// # Safety
// `doc` must be a live document; `out` valid for writes.
enum OntoStatus onto_document_dumps(const struct OntoDocument *doc, char **out);

// JSON rendering. With `entity` set, that entity's records as an array;
// with NULL and one entity, its array; with several, an object keyed by
// entity name. `indent` applies to `ONTO_JSON_STYLE_INDENTED` only.
//
// # Safety
// `doc` must be a live document; `entity` NULL or a C string; `out` valid
// for writes.
enum OntoStatus onto_document_to_json(const struct OntoDocument *doc,
                                      const char *entity,
                                      enum OntoJsonStyle style,
                                      size_t indent,
                                      char **out);

// Converts a JSON array of homogeneous objects to ONTO under `entity`.
//
// # Safety
// `json` and `entity` must be C strings; `out` valid for writes.
enum OntoStatus onto_json_to_onto(const char *json, const char *entity, char **out);

// Loads a `<base64 token> <rank>` rank file (cl100k_base).
//
// # Safety
// `path` must be a C string; `out` valid for writes.
enum OntoStatus onto_tokenizer_load(const char *path, struct OntoTokenizer **out);

// # Safety
// `tok` must come from [`onto_tokenizer_load`] and not have been freed.
// NULL is ignored.
void onto_tokenizer_free(struct OntoTokenizer *tok);

// Token count of `text`. No special tokens are recognised.
//
// # Safety
// `tok` must be a live tokenizer; `text` a C string; `count` valid for writes.
enum OntoStatus onto_tokenizer_count(const struct OntoTokenizer *tok,
                                     const char *text,
                                     size_t *count);

// Token ids of `text` written to `ids` (capacity `cap`); `len` receives the
// full count. Call with `ids = NULL, cap = 0` to size the buffer; a short
// buffer is filled as far as it goes.
//
// # Safety
// `tok` live; `text` a C string; `ids` valid for `cap` writes or NULL;
// `len` valid for writes.
enum OntoStatus onto_tokenizer_encode(const struct OntoTokenizer *tok,
                                      const char *text,
                                      uint32_t *ids,
                                      size_t cap,
                                      size_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ONTO_H */
