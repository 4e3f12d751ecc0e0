/* Merge a general-model CoNLL file with a dictionary CoNLL file and print
 * the result. Build against the static library:
 *
 *   cc -Icrates/ffi/include crates/ffi/examples/unify.c \
 *      target/release/libnerforge_ffi.a -lpthread -ldl -lm -o unify
 */
#include <stdio.h>
#include <stdlib.h>

#include "nerforge.h"

static uint8_t *slurp(const char *path, size_t *len) {
    FILE *f = fopen(path, "rb");
    if (!f) {
        perror(path);
        exit(1);
    }
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    fseek(f, 0, SEEK_SET);
    uint8_t *buf = malloc(n > 0 ? (size_t)n : 1);
    *len = fread(buf, 1, (size_t)n, f);
    fclose(f);
    return buf;
}

static NfDataset *load(const char *path) {
    size_t len;
    uint8_t *data = slurp(path, &len);
    NfDataset *ds = NULL;
    NfStatus status = nf_dataset_parse(data, len, &ds);
    free(data);
    if (status != NF_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", path, nf_last_error());
        exit(1);
    }
    return ds;
}

int main(int argc, char **argv) {
    if (argc != 3) {
        fprintf(stderr, "usage: %s general.conll dict.conll\n", argv[0]);
        return 2;
    }
    NfDataset *general = load(argv[1]);
    NfDataset *dict = load(argv[2]);
    NfDataset *merged = NULL;
    if (nf_unify(general, dict, &merged) != NF_STATUS_OK) {
        fprintf(stderr, "unify: %s\n", nf_last_error());
        return 1;
    }
    char *text = NULL;
    nf_dataset_write(merged, &text);
    fputs(text, stdout);
    fprintf(stderr, "%zu sentences\n", nf_dataset_len(merged));

    nf_string_free(text);
    nf_dataset_free(merged);
    nf_dataset_free(dict);
    nf_dataset_free(general);
    return 0;
}
