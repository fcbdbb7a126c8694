// Copyright 2026 The vsc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VSC_VSC_H
#define VSC_VSC_H

/* C interface to the vsc library: registry, issuer, bank verifier and
 * holder agent, each behind an opaque handle.
 *
 * Conventions:
 *  - Every fallible call returns vsc_status. On failure a message is kept
 *    per thread and readable with vsc_last_error() until the next call.
 *  - Strings handed out through `char** out` are NUL-terminated, owned by
 *    the caller and released with vsc_string_free(). JSON results are
 *    canonical (sorted keys, no whitespace).
 *  - Optional string arguments may be NULL.
 */

#include <stddef.h>

#if defined(_WIN32)
#define VSC_API __declspec(dllexport)
#else
#define VSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* One code per core error kind, in core order. Append only. */
typedef enum vsc_status {
  VSC_OK = 0,
  VSC_E_INVALID_ARGUMENT = 1,
  VSC_E_MALFORMED_VALUE = 2,
  VSC_E_MALFORMED_PAYLOAD = 3,
  VSC_E_NOT_FOUND = 4,
  VSC_E_CHAIN_BROKEN = 5,
  VSC_E_UNAUTHORIZED = 6,
  VSC_E_NON_MONOTONE_STATUS = 7,
  VSC_E_SCHEMA_VIOLATION = 8,
  VSC_E_LADDER_OUT_OF_RANGE = 9,
  VSC_E_STATUS_SLOT_TAKEN = 10,
  VSC_E_PREDICATE_UNSATISFIABLE = 11,
  VSC_E_GROUP_VIOLATION = 12,
  VSC_E_AUDIENCE_VIOLATION = 13,
  VSC_E_UNKNOWN_CLAIM = 14,
  VSC_E_INVALID_SHAPE = 15,
  VSC_E_UNKNOWN_REQUEST = 16,
  VSC_E_REQUEST_EXPIRED = 17,
  VSC_E_ALREADY_DECIDED = 18,
  VSC_E_ROOT_MISMATCH = 19,
  VSC_E_REGISTRY_UNREACHABLE = 20,
  VSC_E_ENDPOINT_UNREACHABLE = 21,
  VSC_E_UNKNOWN_CUSTOMER = 22,
  VSC_E_PARSE_ERROR = 23,
  VSC_E_CHECKSUM_ERROR = 24,
  VSC_E_WRONG_PASSPHRASE = 25,
  VSC_E_IO = 26,
  /* Anything the core did not classify (allocation failure, bugs). */
  VSC_E_INTERNAL = 99
} vsc_status;

VSC_API const char* vsc_version(void);
/* "Ok", "InvalidArgument", ... Never NULL. */
VSC_API const char* vsc_status_name(vsc_status status);
/* Message for the last failed call on this thread; "" if none. */
VSC_API const char* vsc_last_error(void);
VSC_API void vsc_string_free(char* s);

/* ------------------------------------------------------------ registry */

typedef struct vsc_registry vsc_registry;

/* data_dir NULL keeps the chain in memory only. */
VSC_API vsc_status vsc_registry_open(const char* data_dir, vsc_registry** out);
/* listen is "host:port" (port 0 picks one). url_out receives the base URL. */
VSC_API vsc_status vsc_registry_serve(vsc_registry* r, const char* listen, char** url_out);
VSC_API vsc_status vsc_registry_height(vsc_registry* r, size_t* out);
VSC_API void vsc_registry_stop(vsc_registry* r);
VSC_API void vsc_registry_close(vsc_registry* r);

/* -------------------------------------------------------------- issuer */

typedef struct vsc_issuer vsc_issuer;

/* records: CSV or JSON Lines file of subject records (NULL for none).
 * state_dir: key and issuance journal (NULL keeps both in memory). */
VSC_API vsc_status vsc_issuer_open(const char* registry_url, const char* records, const char* state_dir,
                                   vsc_issuer** out);
VSC_API vsc_status vsc_issuer_did(vsc_issuer* i, char** out);
/* Adds more records from a file. */
VSC_API vsc_status vsc_issuer_load_records(vsc_issuer* i, const char* records, size_t* count_out);
VSC_API vsc_status vsc_issuer_serve(vsc_issuer* i, const char* listen, const char* admin_token, char** url_out);
VSC_API vsc_status vsc_issuer_revoke(vsc_issuer* i, const char* credential_id);
/* {"issued":[{"credential":..,"revoked":bool}]} */
VSC_API vsc_status vsc_issuer_issued(vsc_issuer* i, char** json_out);
VSC_API void vsc_issuer_stop(vsc_issuer* i);
VSC_API void vsc_issuer_close(vsc_issuer* i);

/* ---------------------------------------------------------------- bank */

typedef struct vsc_bank vsc_bank;

VSC_API vsc_status vsc_bank_open(const char* registry_url, const char* data_dir, vsc_bank** out);
VSC_API vsc_status vsc_bank_did(vsc_bank* b, char** out);
/* public_url is where holders reach this server; NULL uses the bound URL. */
VSC_API vsc_status vsc_bank_serve(vsc_bank* b, const char* listen, const char* public_url, const char* admin_token,
                                  char** url_out);
VSC_API vsc_status vsc_bank_register_customer(vsc_bank* b, const char* customer_ref, const char* holder_did);
/* scenario_json: {"purpose":..,"scheme"?:..,"items"?:[..]}. Returns the
 * request sent to the holder. */
VSC_API vsc_status vsc_bank_open_exchange(vsc_bank* b, const char* customer_ref, const char* scenario_json,
                                          char** request_out);
/* {"customer_ref":..,"flags":[..]} */
VSC_API vsc_status vsc_bank_flags(vsc_bank* b, const char* customer_ref, char** json_out);
/* now: ISO-8601 instant, NULL for the current time. */
VSC_API vsc_status vsc_bank_review(vsc_bank* b, const char* now, char** json_out);
/* {"flags":n,"presentations":n} */
VSC_API vsc_status vsc_bank_forget(vsc_bank* b, const char* customer_ref, char** json_out);
VSC_API void vsc_bank_stop(vsc_bank* b);
VSC_API void vsc_bank_close(vsc_bank* b);

/* Review of a store directory without a running service or registry. */
VSC_API vsc_status vsc_bank_store_review(const char* data_dir, const char* now, char** json_out);

/* Clients of a running bank's agent routes. token may be NULL (loopback). */
VSC_API vsc_status vsc_bank_client_open_exchange(const char* bank_url, const char* token, const char* customer_ref,
                                                 const char* holder_did, const char* scenario_json,
                                                 char** request_out);
VSC_API vsc_status vsc_bank_client_review(const char* bank_url, const char* token, const char* now,
                                          char** json_out);
VSC_API vsc_status vsc_bank_client_flags(const char* bank_url, const char* token, const char* customer_ref,
                                         char** json_out);

/* -------------------------------------------------------------- wallet */

typedef struct vsc_wallet vsc_wallet;

/* Creates an encrypted wallet file and anchors a fresh holder DID. Fails
 * with VSC_E_INVALID_ARGUMENT if the file exists. */
VSC_API vsc_status vsc_wallet_create(const char* file, const char* passphrase, const char* registry_url,
                                     vsc_wallet** out);
VSC_API vsc_status vsc_wallet_open(const char* file, const char* passphrase, const char* registry_url,
                                   vsc_wallet** out);
VSC_API vsc_status vsc_wallet_did(vsc_wallet* w, char** out);
/* Requests and stores both credentials issued for this holder. Returns the
 * stored entries' public view. */
VSC_API vsc_status vsc_wallet_fetch(vsc_wallet* w, const char* issuer_url, const char* nhs_number, char** json_out);
/* {"holder":..,"credentials":[..]}; claim values but never salts or seeds. */
VSC_API vsc_status vsc_wallet_list(vsc_wallet* w, char** json_out);
VSC_API vsc_status vsc_wallet_refresh(vsc_wallet* w, char** json_out);
/* Starts the agent's HTTP server, publishes public_url (or the bound URL)
 * as the DID's service endpoint and starts auto-denying expired requests. */
VSC_API vsc_status vsc_wallet_serve(vsc_wallet* w, const char* listen, const char* public_url, char** url_out);
VSC_API void vsc_wallet_stop(vsc_wallet* w);
VSC_API void vsc_wallet_close(vsc_wallet* w);

typedef enum vsc_decision { VSC_DECISION_ACCEPT_ALL = 0, VSC_DECISION_DENY = 1, VSC_DECISION_PARTIAL = 2 } vsc_decision;

/* Clients of a running agent's loopback API. */
VSC_API vsc_status vsc_agent_inbox(const char* agent_url, char** json_out);
/* granted/count are the item indices for VSC_DECISION_PARTIAL. */
VSC_API vsc_status vsc_agent_decide(const char* agent_url, const char* request_id, vsc_decision decision,
                                    const size_t* granted, size_t count, char** json_out);
VSC_API vsc_status vsc_agent_audit(const char* agent_url, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
