#pragma once

// Command-line front end. A thin adapter over the library: every subcommand
// parses arguments, calls the same public API the tests and bindings use,
// and formats the result — no logic of its own.
//
// Stateful subcommands (ingest, query, history, promote, delete, verify,
// snapshot) operate on a store backed by an event journal (--log PATH):
// the journal is replayed to rebuild the store, and new writes append to it.
// Stateless subcommands (bench, calibrate, corpus) need no journal.
//
// Exit codes: 0 success; 1 operational failure (missing object, conflicting
// state, storage/integrity problems); 2 usage or configuration errors.

#include <iosfwd>
#include <string>
#include <vector>

namespace kogate::cli {

/// Run the CLI in-process. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace kogate::cli
