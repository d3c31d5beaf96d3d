#include <stdio.h>
#include <string.h>

#include "onto.h"

#define CHECK(cond)                                                          \
    do {                                                                     \
        if (!(cond)) {                                                       \
            const char *m = onto_last_error_message();                       \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,   \
                    m ? m : "no message");                                   \
            return 1;                                                        \
        }                                                                    \
    } while (0)

int main(int argc, char **argv) {
    const char *listing =
        "Telemetry[2]:\n"
        "    device_id: sensor-001|sensor-002\n"
        "    location:\n"
        "        lat: 37.77|37.78\n";

    OntoDocument *doc = NULL;
    OntoParseError err;
    CHECK(onto_parse(listing, &doc, &err) == ONTO_STATUS_OK);
    CHECK(err.kind == ONTO_PARSE_ERROR_KIND_NONE);
    CHECK(onto_document_entity_count(doc) == 1);

    char *name = NULL;
    size_t count = 0;
    CHECK(onto_document_entity(doc, 0, &name, &count) == ONTO_STATUS_OK);
    CHECK(strcmp(name, "Telemetry") == 0 && count == 2);
    onto_string_free(name);

    char *text = NULL;
    CHECK(onto_document_dumps(doc, &text) == ONTO_STATUS_OK);
    CHECK(strcmp(text, listing) == 0);
    onto_string_free(text);

    char *json = NULL;
    CHECK(onto_document_to_json(doc, NULL, ONTO_JSON_STYLE_COMPACT, 0, &json) == ONTO_STATUS_OK);
    CHECK(strcmp(json, "[{\"device_id\":\"sensor-001\",\"location\":{\"lat\":37.77}},"
                       "{\"device_id\":\"sensor-002\",\"location\":{\"lat\":37.78}}]") == 0);

    char *back = NULL;
    CHECK(onto_json_to_onto(json, "Telemetry", &back) == ONTO_STATUS_OK);
    CHECK(strcmp(back, listing) == 0);
    onto_string_free(back);
    onto_string_free(json);
    onto_document_free(doc);

    doc = NULL;
    CHECK(onto_parse("E[2]:\n    f: 1|2|3\n", &doc, &err) == ONTO_STATUS_PARSE_ERROR);
    CHECK(doc == NULL);
    CHECK(err.kind == ONTO_PARSE_ERROR_KIND_COUNT_MISMATCH && err.line == 2);
    CHECK(strstr(onto_last_error_message(), "CountMismatch") != NULL);

    if (argc > 1) {
        OntoTokenizer *tok = NULL;
        CHECK(onto_tokenizer_load(argv[1], &tok) == ONTO_STATUS_OK);
        size_t n = 0;
        CHECK(onto_tokenizer_count(tok, "hello world", &n) == ONTO_STATUS_OK);
        CHECK(n == 2);
        uint32_t ids[4];
        CHECK(onto_tokenizer_encode(tok, "hello world", ids, 4, &n) == ONTO_STATUS_OK);
        CHECK(n == 2 && ids[0] == 15339 && ids[1] == 1917);
        onto_tokenizer_free(tok);
    }

    printf("ok %s\n", onto_version());
    return 0;
}
