#include "chorgate/bpmn/parse.hpp"

#include <expat.h>

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chorgate::bpmn {

namespace {

constexpr const char* kOrigin = "bpmn";
constexpr std::string_view kDiNamespace = "http://www.omg.org/spec/BPMN/20100524/DI";

struct XmlNode {
    std::string ns;
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlNode> children;
    std::string text;
    std::size_t line = 0;
    std::string path;

    std::optional<std::string> attr(std::string_view key) const {
        for (const auto& [k, v] : attrs) {
            if (k == key) return v;
        }
        return std::nullopt;
    }
    bool is_bpmn(std::string_view local) const { return ns == kModelNamespace && name == local; }
};

struct DomBuilder {
    XmlNode root;
    bool has_root = false;
    std::vector<XmlNode*> stack;
    XML_Parser parser = nullptr;
    std::optional<Diagnostic> abort;
};

void split_name(const XML_Char* raw, std::string& ns, std::string& local) {
    std::string s(raw);
    auto pos = s.find(' ');
    if (pos == std::string::npos) {
        ns.clear();
        local = std::move(s);
    } else {
        ns = s.substr(0, pos);
        local = s.substr(pos + 1);
    }
}

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* b = static_cast<DomBuilder*>(data);
    XmlNode node;
    split_name(name, node.ns, node.name);
    node.line = XML_GetCurrentLineNumber(b->parser);
    for (std::size_t i = 0; atts[i] != nullptr; i += 2) {
        std::string ans, alocal;
        split_name(atts[i], ans, alocal);
        node.attrs.emplace_back(ans.empty() ? alocal : ans + " " + alocal, atts[i + 1]);
    }
    const std::string parent_path = b->stack.empty() ? std::string() : b->stack.back()->path;
    node.path = parent_path + "/" + node.name;
    if (auto id = node.attr("id")) node.path += "[@id='" + *id + "']";

    if (b->stack.empty()) {
        b->root = std::move(node);
        b->has_root = true;
        b->stack.push_back(&b->root);
    } else {
        auto& siblings = b->stack.back()->children;
        siblings.push_back(std::move(node));
        b->stack.push_back(&siblings.back());
    }
}

void XMLCALL on_end(void* data, const XML_Char*) {
    static_cast<DomBuilder*>(data)->stack.pop_back();
}

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
    auto* b = static_cast<DomBuilder*>(data);
    if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

void XMLCALL on_doctype(void* data, const XML_Char*, const XML_Char*, const XML_Char*, int) {
    auto* b = static_cast<DomBuilder*>(data);
    b->abort = make_error(kOrigin, "MalformedXml", "", "document type declarations are not accepted",
                          XML_GetCurrentLineNumber(b->parser));
    XML_StopParser(b->parser, XML_FALSE);
}

Result<XmlNode> parse_xml(std::string_view document) {
    DomBuilder b;
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreateNS("UTF-8", ' '),
                                                                         &XML_ParserFree);
    b.parser = parser.get();
    XML_SetUserData(b.parser, &b);
    XML_SetElementHandler(b.parser, on_start, on_end);
    XML_SetCharacterDataHandler(b.parser, on_text);
    XML_SetStartDoctypeDeclHandler(b.parser, on_doctype);

    const auto status = XML_Parse(b.parser, document.data(), static_cast<int>(document.size()), XML_TRUE);
    if (b.abort) return Result<XmlNode>::failure({*b.abort});
    if (status != XML_STATUS_OK) {
        return Result<XmlNode>::failure({make_error(
            kOrigin, "MalformedXml", "", XML_ErrorString(XML_GetErrorCode(b.parser)),
            XML_GetCurrentLineNumber(b.parser))});
    }
    if (!b.has_root) {
        return Result<XmlNode>::failure({make_error(kOrigin, "MalformedXml", "", "document is empty")});
    }
    return Result<XmlNode>::success(std::move(b.root));
}

std::string trim(std::string s) {
    const char* ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

// References are QNames; ids are NCNames, so any prefix can be dropped.
std::string local_ref(std::string ref) {
    ref = trim(std::move(ref));
    if (auto pos = ref.find(':'); pos != std::string::npos) ref.erase(0, pos + 1);
    return ref;
}

bool is_passive(const XmlNode& n) {
    return n.ns == kDiNamespace || n.is_bpmn("documentation") || n.is_bpmn("extensionElements");
}

const std::set<std::string, std::less<>> kUnsupported = {
    "inclusiveGateway",       "eventBasedGateway",       "complexGateway", "subChoreography",
    "callChoreography",       "intermediateCatchEvent",  "intermediateThrowEvent",
    "boundaryEvent",          "timerEventDefinition",    "multiInstanceLoopCharacteristics",
};

struct ParticipantDecl {
    std::string identity;
    const XmlNode* el;
};

struct MessageFlowDecl {
    std::string id;
    std::string source;
    std::string target;
    std::string message;
    const XmlNode* el;
};

struct TaskDecl {
    const XmlNode* el;
    std::string id;
    std::string name;
    std::optional<std::string> initiator;
    std::vector<std::string> participant_refs;
    std::vector<std::string> flow_refs;
    std::optional<LoopMarker> loop;
};

class Interpreter {
public:
    explicit Interpreter(const XmlNode& root) : root_(root) {}

    Result<ChoreographyModel> run() {
        if (!root_.is_bpmn("definitions")) {
            error("MissingDefinitions", root_,
                  "root element must be definitions in namespace " + std::string(kModelNamespace) +
                      " (found '" + root_.name + "'" + (root_.ns.empty() ? "" : " in " + root_.ns) + ")");
            return finish();
        }

        std::vector<const XmlNode*> choreographies;
        for (const auto& c : root_.children) {
            if (c.is_bpmn("message")) {
                const auto id = c.attr("id").value_or("");
                register_id(id, c);
                messages_[id] = c.attr("name").value_or(id);
            } else if (c.is_bpmn("choreography")) {
                choreographies.push_back(&c);
            } else if (!is_passive(c)) {
                warn("UnrecognizedElement", c, "element '" + c.name + "' is not interpreted");
            }
        }
        if (choreographies.empty()) {
            error("MissingChoreography", root_, "definitions contains no choreography element");
            return finish();
        }
        for (std::size_t i = 1; i < choreographies.size(); ++i) {
            warn("UnrecognizedElement", *choreographies[i],
                 "only the first choreography is validated; this one is ignored");
        }
        read_choreography(*choreographies.front());
        if (has_errors(diags_)) return finish();
        return assemble();
    }

private:
    void error(const char* code, const XmlNode& at, std::string message) {
        diags_.push_back(make_error(kOrigin, code, at.path, std::move(message), at.line));
    }
    void warn(const char* code, const XmlNode& at, std::string message) {
        diags_.push_back(make_warning(kOrigin, code, at.path, std::move(message), at.line));
    }

    void register_id(const std::string& id, const XmlNode& el) {
        if (id.empty()) {
            error("MissingId", el, "element '" + el.name + "' has no id attribute");
            return;
        }
        auto [it, inserted] = elements_.emplace(id, &el);
        if (!inserted) {
            error("DuplicateId", el,
                  "id '" + id + "' already used at line " + std::to_string(it->second->line));
        }
    }

    void reject_unsupported(const XmlNode& c) {
        error("UnsupportedElement", c, "element '" + c.name + "' alters control flow and is not supported");
    }

    std::optional<LoopMarker> read_loop_children(const XmlNode& el) {
        std::optional<LoopMarker> loop;
        if (auto lt = el.attr("loopType")) {
            if (*lt == "Standard") {
                loop = LoopMarker{false};
            } else if (*lt != "None") {
                error("UnsupportedElement", el, "loopType '" + *lt + "' is not supported");
            }
        }
        return loop;
    }

    void read_node_children(const XmlNode& el, TaskDecl* task) {
        for (const auto& c : el.children) {
            if (is_passive(c) || c.is_bpmn("incoming") || c.is_bpmn("outgoing")) continue;
            if (c.ns == kModelNamespace && kUnsupported.contains(c.name)) {
                reject_unsupported(c);
            } else if (task != nullptr && c.is_bpmn("participantRef")) {
                task->participant_refs.push_back(local_ref(c.text));
            } else if (task != nullptr && c.is_bpmn("messageFlowRef")) {
                task->flow_refs.push_back(local_ref(c.text));
            } else if (task != nullptr && c.is_bpmn("standardLoopCharacteristics")) {
                task->loop = LoopMarker{c.attr("testBefore").value_or("false") == "true"};
            } else if (c.ns == kModelNamespace && c.name.ends_with("EventDefinition")) {
                warn("UnrecognizedElement", c,
                     "event definition '" + c.name + "' is ignored; the event is treated as untyped");
            } else if (c.is_bpmn("conditionExpression")) {
                // branching is a nondeterministic choice
            } else {
                warn("UnrecognizedElement", c, "element '" + c.name + "' inside '" + el.name +
                                                   "' is not interpreted");
            }
        }
    }

    void read_choreography(const XmlNode& chor) {
        const auto id = chor.attr("id").value_or("");
        name_ = chor.attr("name").value_or(id.empty() ? std::string("choreography") : id);
        if (!id.empty()) register_id(id, chor);

        for (const auto& c : chor.children) {
            if (is_passive(c)) continue;
            if (c.ns != kModelNamespace) {
                warn("UnrecognizedElement", c, "foreign element '" + c.name + "' is not interpreted");
                continue;
            }
            const auto cid = c.attr("id").value_or("");
            if (c.name == "participant") {
                register_id(cid, c);
                participants_.emplace(cid, ParticipantDecl{c.attr("name").value_or(cid), &c});
                participant_order_.push_back(cid);
            } else if (c.name == "messageFlow") {
                register_id(cid, c);
                message_flows_.push_back(MessageFlowDecl{cid, local_ref(c.attr("sourceRef").value_or("")),
                                                         local_ref(c.attr("targetRef").value_or("")),
                                                         c.attr("messageRef").value_or(""), &c});
            } else if (c.name == "choreographyTask") {
                register_id(cid, c);
                TaskDecl t{&c, cid, c.attr("name").value_or(""), std::nullopt, {}, {}, read_loop_children(c)};
                if (auto init = c.attr("initiatingParticipantRef")) t.initiator = local_ref(*init);
                read_node_children(c, &t);
                tasks_.push_back(std::move(t));
            } else if (c.name == "sequenceFlow") {
                register_id(cid, c);
                read_node_children(c, nullptr);
                flows_.push_back(&c);
            } else if (c.name == "startEvent" || c.name == "endEvent" || c.name == "exclusiveGateway" ||
                       c.name == "parallelGateway") {
                register_id(cid, c);
                read_node_children(c, nullptr);
                plain_nodes_.push_back(&c);
            } else if (kUnsupported.contains(c.name)) {
                reject_unsupported(c);
            } else {
                warn("UnrecognizedElement", c, "element '" + c.name + "' is not interpreted");
            }
        }
    }

    Result<ChoreographyModel> assemble() {
        ChoreographyModel model;
        model.name = name_;

        std::set<std::string> identities;
        for (const auto& pid : participant_order_) {
            const auto& p = participants_.at(pid);
            if (!identities.insert(p.identity).second) {
                error("DuplicateParticipant", *p.el,
                      "participant name '" + p.identity + "' is used by more than one participant");
            }
        }
        model.participants.assign(identities.begin(), identities.end());

        std::map<std::string, const MessageFlowDecl*> flow_by_id;
        for (auto& mf : message_flows_) {
            flow_by_id[mf.id] = &mf;
            for (const auto* end : {&mf.source, &mf.target}) {
                if (!participants_.contains(*end)) {
                    error("DanglingReference", *mf.el,
                          "messageFlow '" + mf.id + "' references unknown participant '" + *end + "'");
                }
            }
            if (mf.message.empty()) {
                mf.message = mf.el->attr("name").value_or(mf.id);
                warn("MissingMessageRef", *mf.el,
                     "messageFlow '" + mf.id + "' has no messageRef; using '" + mf.message + "' as message name");
            } else {
                const auto ref = local_ref(mf.message);
                auto it = messages_.find(ref);
                if (it == messages_.end()) {
                    error("DanglingReference", *mf.el,
                          "messageFlow '" + mf.id + "' references unknown message '" + ref + "'");
                } else {
                    mf.message = it->second;
                }
            }
        }

        std::map<std::string, std::string> owner;  // message flow id -> first owning task
        for (const auto& t : tasks_) {
            Node n{t.id, NodeKind::choreography_task, t.name, {}, {}, t.loop};
            for (const auto& pref : t.participant_refs) {
                if (!participants_.contains(pref)) {
                    error("DanglingReference", *t.el,
                          "choreographyTask '" + t.id + "' references unknown participant '" + pref + "'");
                }
            }
            if (t.initiator && !participants_.contains(*t.initiator)) {
                error("DanglingReference", *t.el,
                      "initiatingParticipantRef '" + *t.initiator + "' does not name a participant");
            }
            if (t.flow_refs.empty() || t.flow_refs.size() > 2) {
                error("BadTaskMessages", *t.el,
                      "choreographyTask '" + t.id + "' must reference one or two message flows (has " +
                          std::to_string(t.flow_refs.size()) + ")");
                continue;
            }
            std::vector<const MessageFlowDecl*> refs;
            for (const auto& r : t.flow_refs) {
                auto it = flow_by_id.find(r);
                if (it == flow_by_id.end()) {
                    error("DanglingReference", *t.el,
                          "messageFlowRef '" + r + "' does not name a messageFlow");
                } else {
                    refs.push_back(it->second);
                }
            }
            if (refs.size() != t.flow_refs.size()) continue;

            if (t.initiator) {
                const auto& init_id = *t.initiator;
                auto first = std::find_if(refs.begin(), refs.end(),
                                          [&](const MessageFlowDecl* f) { return f->source == init_id; });
                if (first == refs.end()) {
                    error("BadTaskMessages", *t.el,
                          "no message flow of choreographyTask '" + t.id + "' is sent by its initiator '" +
                              init_id + "'");
                    continue;
                }
                if (refs.size() == 2 && refs[0]->source == init_id && refs[1]->source == init_id) {
                    error("BadTaskMessages", *t.el,
                          "both message flows of choreographyTask '" + t.id + "' are sent by the initiator");
                    continue;
                }
                std::rotate(refs.begin(), first, first + 1);
            } else {
                warn("MissingInitiator", *t.el,
                     "choreographyTask '" + t.id +
                         "' has no initiatingParticipantRef; message flows are taken in document order");
            }
            n.initiating_link = refs[0]->id;
            if (refs.size() == 2) n.return_link = refs[1]->id;
            for (const auto* f : refs) owner.emplace(f->id, t.id);
            model.nodes.push_back(std::move(n));
        }

        for (const auto* el : plain_nodes_) {
            Node n;
            n.id = el->attr("id").value_or("");
            n.name = el->attr("name").value_or("");
            if (el->name == "startEvent") n.kind = NodeKind::start_event;
            else if (el->name == "endEvent") n.kind = NodeKind::end_event;
            else if (el->name == "exclusiveGateway") n.kind = NodeKind::exclusive_gateway;
            else n.kind = NodeKind::parallel_gateway;
            model.nodes.push_back(std::move(n));
        }
        std::stable_sort(model.nodes.begin(), model.nodes.end(), [&](const Node& a, const Node& b) {
            return elements_.at(a.id)->line < elements_.at(b.id)->line;
        });

        for (const auto* el : flows_) {
            SequenceFlow f{el->attr("id").value_or(""), local_ref(el->attr("sourceRef").value_or("")),
                           local_ref(el->attr("targetRef").value_or(""))};
            bool ok = true;
            for (const auto* end : {&f.source, &f.target}) {
                if (model.find_node(*end) == nullptr) {
                    error("DanglingReference", *el,
                          "sequenceFlow '" + f.id + "' references unknown flow node '" + *end + "'");
                    ok = false;
                }
            }
            if (ok) model.flows.push_back(std::move(f));
        }

        for (const auto& mf : message_flows_) {
            auto it = owner.find(mf.id);
            const std::string activity = it == owner.end() ? std::string() : it->second;
            auto identity = [&](const std::string& pid) {
                auto p = participants_.find(pid);
                return p == participants_.end() ? pid : p->second.identity;
            };
            model.links.push_back(MessageLink{mf.id, mf.message, identity(mf.source), identity(mf.target),
                                              activity, activity});
        }

        if (has_errors(diags_)) return finish();

        for (auto d : validate_choreography(model)) {
            if (auto it = elements_.find(d.location); it != elements_.end()) {
                d.location = it->second->path;
                d.line = it->second->line;
            }
            diags_.push_back(std::move(d));
        }
        if (has_errors(diags_)) return finish();
        return Result<ChoreographyModel>::success(std::move(model), std::move(diags_));
    }

    Result<ChoreographyModel> finish() { return Result<ChoreographyModel>::failure(std::move(diags_)); }

    const XmlNode& root_;
    Diagnostics diags_;
    std::string name_;
    std::map<std::string, const XmlNode*> elements_;
    std::map<std::string, std::string> messages_;
    std::map<std::string, ParticipantDecl> participants_;
    std::vector<std::string> participant_order_;
    std::vector<MessageFlowDecl> message_flows_;
    std::vector<TaskDecl> tasks_;
    std::vector<const XmlNode*> flows_;
    std::vector<const XmlNode*> plain_nodes_;
};

}  // namespace

Result<ChoreographyModel> parse_choreography(std::string_view document) {
    auto dom = parse_xml(document);
    if (!dom) return Result<ChoreographyModel>::failure(dom.diagnostics());
    return Interpreter(dom.value()).run();
}

}  // namespace chorgate::bpmn
