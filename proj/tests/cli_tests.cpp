#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

// End-to-end checks of the installed command-line interface; every test
// drives the real binary in a subprocess.

namespace {

const std::string kCli = EPN_TEST_CLI;
const std::string kScales = EPN_TEST_SCALES;
const std::string kSynth = EPN_TEST_SYNTH;

std::filesystem::path tmp_dir() {
    static const std::filesystem::path dir = [] {
        const std::filesystem::path p = "cli_tmp";
        std::filesystem::remove_all(p);
        std::filesystem::create_directories(p);
        return p;
    }();
    return dir;
}

std::string tmp(const std::string& name) { return (tmp_dir() / name).string(); }

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

RunResult run(const std::string& args) {
    static int counter = 0;
    const std::string capture = tmp("run_output_" + std::to_string(counter++) + ".txt");
    const std::string cmd = kCli + " " + args + " > " + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// A tiny but fully valid dataset file.
std::string fixture_csv() {
    const std::string header =
        "parent_protein_id,protein_seq,start_position,end_position,peptide_seq,"
        "chou_fasman,emini,kolaskar_tongaonkar,parker,isoelectric_point,"
        "aromaticity,hydrophobicity,stability,target";
    const std::string protein = "MKLLDFVRFMGVSEYDPKTACWHNQIGR";
    std::string text = header + "\n";
    text += "prot1," + protein + ",3,7,LLDFV,0.9,1.1,1.0,2.5,6.1,0.05,0.3,30.0,1\n";
    text += "prot1," + protein + ",10,14,MGVSE,1.0,0.8,0.98,1.5,6.1,0.05,0.3,30.0,0\n";
    return text;
}

const std::string kTrainArgs = " --hidden 4 --epochs 2 --batch 256 --seed 9";

std::string train_into(const std::string& out_dir) {
    return "train --data \"" + kSynth + "\" --scales \"" + kScales + "\" --out " + out_dir +
           kTrainArgs;
}

} // namespace

TEST_CASE("no arguments is a usage error") {
    const RunResult r = run("");
    CHECK(r.exit_code == 2);
    CHECK((contains(r.output, "Usage") || contains(r.output, "subcommand")));
}

TEST_CASE("unknown subcommands and flags are usage errors") {
    CHECK(run("bogus").exit_code == 2);
    CHECK(run("train --nonsense").exit_code == 2);
    CHECK(run("evaluate --subset sideways --model m --data d").exit_code == 2);
}

TEST_CASE("--version exits cleanly") {
    const RunResult r = run("--version");
    CHECK(r.exit_code == 0);
    CHECK_FALSE(r.output.empty());
}

TEST_CASE("missing input files are data errors") {
    const RunResult r = run("features --data no_such.csv --out " + tmp("x.csv") +
                            " --scales \"" + kScales + "\"");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "error:"));
}

TEST_CASE("a broken scales directory is a data error") {
    const RunResult r = run("features --data no_such.csv --out " + tmp("x.csv") +
                            " --scales no_such_dir");
    CHECK(r.exit_code == 3);
}

TEST_CASE("features reports ingestion and writes descriptor csv") {
    const std::string data = tmp("fixture.csv");
    write_file(data, fixture_csv());
    const std::string out = tmp("fixture_features.csv");

    const RunResult r = run("features --data " + data + " --out " + out + " --scales \"" +
                            kScales + "\" --mode recompute --summary " + tmp("sum.csv") +
                            " --correlation " + tmp("corr.csv") + " --compare " +
                            tmp("cmp.csv"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.output, "loaded: 2"));
    CHECK(contains(r.output, "rejected: 0"));
    CHECK(contains(r.output, "wrote " + out));

    CHECK(read_file(out).rfind("chou_fasman,", 0) == 0);
    CHECK(contains(read_file(tmp("sum.csv")), "mean"));
    CHECK(contains(read_file(tmp("corr.csv")), "chou_fasman"));
    CHECK(read_file(tmp("cmp.csv")).rfind("row,feature,", 0) == 0);
}

TEST_CASE("train writes model, loss curve and manifest") {
    const RunResult r = run(train_into(tmp("run1")));
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "loaded 14907 rows (0 rejected)"));
    CHECK(contains(r.output, "split sizes: train 9541, val 2385, test 2981"));
    CHECK(contains(r.output, "stopped after epoch 2"));

    CHECK(read_file(tmp("run1/model.txt")).rfind("epinet_model 1\n", 0) == 0);
    CHECK(read_file(tmp("run1/loss.csv")).rfind("epoch,train_loss,val_loss\n", 0) == 0);

    const std::string manifest = read_file(tmp("run1/manifest.txt"));
    CHECK(contains(manifest, "seed = 9"));
    CHECK(contains(manifest, "hidden = 4"));
    CHECK(contains(manifest, "epochs = 2"));
    CHECK(contains(manifest, "run.dataset-checksum = 0x"));
    CHECK(contains(manifest, "run.train-size = 9541"));
    CHECK(contains(manifest, "run.model-file = model.txt"));
}

TEST_CASE("identical train invocations reproduce artifacts byte for byte") {
    REQUIRE(run(train_into(tmp("run2"))).exit_code == 0);
    CHECK(read_file(tmp("run2/model.txt")) == read_file(tmp("run1/model.txt")));
    CHECK(read_file(tmp("run2/loss.csv")) == read_file(tmp("run1/loss.csv")));

    // ... and the manifest reproduces the run as a --config file
    const RunResult r = run("evaluate --manifest nothing_here.txt");
    CHECK(r.exit_code == 3);

    const RunResult rerun =
        run("train --config " + tmp("run1/manifest.txt") + " --out " + tmp("run3"));
    REQUIRE(rerun.exit_code == 0);
    CHECK(read_file(tmp("run3/model.txt")) == read_file(tmp("run1/model.txt")));
    CHECK(read_file(tmp("run3/loss.csv")) == read_file(tmp("run1/loss.csv")));

    // flags take precedence over config values
    const RunResult shorter = run("train --config " + tmp("run1/manifest.txt") + " --out " +
                                  tmp("run4") + " --epochs 1");
    REQUIRE(shorter.exit_code == 0);
    CHECK(contains(shorter.output, "stopped after epoch 1"));
    CHECK(read_file(tmp("run4/model.txt")) != read_file(tmp("run1/model.txt")));
}

TEST_CASE("evaluate from a manifest scores the held-out test split") {
    const RunResult r = run("evaluate --manifest " + tmp("run1/manifest.txt") + " --out " +
                            tmp("eval1"));
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.output, "Covid_Negative"));
    CHECK(contains(r.output, "wrote"));

    CHECK(contains(read_file(tmp("eval1/report.txt")), "weighted avg"));
    CHECK(read_file(tmp("eval1/report.csv")).rfind("class,precision,recall,f1,support\n", 0) ==
          0);

    // confusion over the test subset covers exactly the test split
    const std::string cm = read_file(tmp("eval1/confusion.csv"));
    CHECK(cm.rfind(",pred_0,pred_1\n", 0) == 0);
    long long total = 0;
    std::istringstream in(cm);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = line.find(',', c1 + 1);
        total += std::stoll(line.substr(c1 + 1, c2 - c1 - 1)) + std::stoll(line.substr(c2 + 1));
    }
    CHECK(total == 2981);
}

TEST_CASE("evaluate detects dataset drift via the manifest checksum") {
    // same parsed records, different bytes
    write_file(tmp("tampered.csv"), read_file(kSynth) + "\n");
    const RunResult r = run("evaluate --manifest " + tmp("run1/manifest.txt") + " --data " +
                            tmp("tampered.csv") + " --out " + tmp("eval_tampered"));
    CHECK(r.exit_code == 3);
    CHECK(contains(r.output, "dataset checksum mismatch"));
}

TEST_CASE("evaluate in plain data mode defaults to the whole dataset") {
    const RunResult r = run("evaluate --model " + tmp("run1/model.txt") + " --data \"" +
                            kSynth + "\" --scales \"" + kScales + "\" --format csv --out " +
                            tmp("eval_all"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.rfind("class,precision,recall,f1,support\n", 0) == 0);

    const std::string cm = read_file(tmp("eval_all/confusion.csv"));
    long long total = 0;
    std::istringstream in(cm);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = line.find(',', c1 + 1);
        total += std::stoll(line.substr(c1 + 1, c2 - c1 - 1)) + std::stoll(line.substr(c2 + 1));
    }
    CHECK(total == 14907);
}

TEST_CASE("evaluate without model or data is a usage error") {
    const RunResult no_model = run("evaluate --data " + tmp("fixture.csv"));
    CHECK(no_model.exit_code == 2);
    CHECK(contains(no_model.output, "--model or --manifest"));

    const RunResult no_data = run("evaluate --model " + tmp("run1/model.txt"));
    CHECK(no_data.exit_code == 2);
    CHECK(contains(no_data.output, "--data or --manifest"));
}

TEST_CASE("a corrupt model file is a model error") {
    write_file(tmp("garbage_model.txt"), "junk\n");
    const RunResult r = run("evaluate --model " + tmp("garbage_model.txt") + " --data \"" +
                            kSynth + "\" --scales \"" + kScales + "\"");
    CHECK(r.exit_code == 4);
    CHECK(contains(r.output, "bad magic"));
}

TEST_CASE("importance writes the ranked csv") {
    const RunResult r = run("importance --model " + tmp("run1/model.txt") + " --data \"" +
                            kSynth + "\" --scales \"" + kScales +
                            "\" --subset val --seed 9 --repeats 2 --out " + tmp("imp.csv"));
    REQUIRE(r.exit_code == 0);

    const std::string csv = read_file(tmp("imp.csv"));
    CHECK(csv.rfind("feature,importance_mean,importance_std\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9); // header + 8 features
    CHECK(r.output == csv);

    const RunResult bad = run("importance --model " + tmp("run1/model.txt") + " --data \"" +
                              kSynth + "\" --scales \"" + kScales +
                              "\" --metric banana --out " + tmp("imp2.csv"));
    CHECK(bad.exit_code == 2);
    CHECK(contains(bad.output, "valid metrics"));
}

TEST_CASE("predict appends columns and keeps header-only inputs header-only") {
    const std::string features_header =
        "chou_fasman,emini,kolaskar_tongaonkar,parker,isoelectric_point,"
        "aromaticity,hydrophobicity,stability";
    write_file(tmp("predict_in.csv"), features_header + "\n0.9,1.1,1.0,2.5,6.1,0.05,0.3,30\n");
    const RunResult r = run("predict --model " + tmp("run1/model.txt") + " --data " +
                            tmp("predict_in.csv") + " --out " + tmp("predict_out.csv") +
                            " --scales \"" + kScales + "\"");
    REQUIRE(r.exit_code == 0);
    const std::string out = read_file(tmp("predict_out.csv"));
    CHECK(out.rfind(features_header + ",probability,label\n", 0) == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 2);

    write_file(tmp("predict_empty.csv"), features_header + "\n");
    REQUIRE(run("predict --model " + tmp("run1/model.txt") + " --data " +
                tmp("predict_empty.csv") + " --out " + tmp("predict_empty_out.csv") +
                " --scales \"" + kScales + "\"")
                .exit_code == 0);
    const std::string empty_out = read_file(tmp("predict_empty_out.csv"));
    CHECK(empty_out == features_header + ",probability,label\n");

    write_file(tmp("predict_seq.csv"), "peptide_seq,protein_seq\nLLDFV,MKLLDFVRFMGVSEYDPK\n");
    const RunResult seq = run("predict --model " + tmp("run1/model.txt") + " --data " +
                              tmp("predict_seq.csv") + " --out " + tmp("predict_seq_out.csv") +
                              " --from-sequences --scales \"" + kScales + "\"");
    REQUIRE(seq.exit_code == 0);
    CHECK(contains(read_file(tmp("predict_seq_out.csv")), ",probability,label"));
}
