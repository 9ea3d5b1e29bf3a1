#include "sprcal/spr/transcript_io.hpp"

#include <sstream>

#include <json.hpp>

namespace sprcal::spr {

using nlohmann::json;

std::string to_jsonl(const Transcript& tr) {
    std::ostringstream out;
    json header = {{"n", tr.n},
                   {"s", tr.s},
                   {"seed", tr.seed},
                   {"pointer_id", tr.pointer_id},
                   {"labeler_id", tr.labeler_id},
                   {"terminated_early", tr.terminated_early}};
    out << header.dump() << '\n';
    for (const auto& r : tr.rounds) {
        json row = {{"j", r.pointed}, {"removed", r.removed}, {"sign", std::string(1, symbol(r.placed))}};
        out << row.dump() << '\n';
    }
    return out.str();
}

Transcript from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Transcript tr;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json obj = json::parse(line);
        if (!have_header) {
            tr.n = obj.at("n").get<int>();
            tr.s = obj.at("s").get<int>();
            tr.seed = obj.at("seed").get<std::uint64_t>();
            tr.pointer_id = obj.at("pointer_id").get<std::string>();
            tr.labeler_id = obj.at("labeler_id").get<std::string>();
            tr.terminated_early = obj.value("terminated_early", false);
            have_header = true;
            continue;
        }
        RoundRecord r;
        r.pointed = obj.at("j").get<int>();
        r.removed = obj.at("removed").get<std::vector<int>>();
        auto sign = obj.at("sign").get<std::string>();
        if (sign == "+") r.placed = Sign::Plus;
        else if (sign == "-") r.placed = Sign::Minus;
        else throw RuleError("bad sign '" + sign + "' in transcript");
        tr.rounds.push_back(std::move(r));
    }
    if (!have_header) throw RuleError("transcript has no header line");
    return tr;
}

}  // namespace sprcal::spr
