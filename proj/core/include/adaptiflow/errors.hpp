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

#ifndef ADAPTIFLOW_ERRORS_HPP_
#define ADAPTIFLOW_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace adaptiflow {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicateCollectorId : public Error {
public:
    explicit DuplicateCollectorId(const std::string& id)
        : Error("duplicate collector id: " + id) {}
};

class UnknownCollector : public Error {
public:
    explicit UnknownCollector(const std::string& id) : Error("unknown collector: " + id) {}
};

class CollectorUnavailable : public Error {
public:
    using Error::Error;
};

class DuplicateActionId : public Error {
public:
    explicit DuplicateActionId(const std::string& id) : Error("duplicate action id: " + id) {}
};

class UnknownAction : public Error {
public:
    explicit UnknownAction(const std::string& id) : Error("unknown action: " + id) {}
};

class UnknownEvent : public Error {
public:
    explicit UnknownEvent(const std::string& name) : Error("unknown event: " + name) {}
};

class DuplicateEventName : public Error {
public:
    explicit DuplicateEventName(const std::string& name)
        : Error("duplicate event name: " + name) {}
};

class TargetUnreachable : public Error {
public:
    explicit TargetUnreachable(const std::string& target, const std::string& why = {})
        : Error("target unreachable: " + target + (why.empty() ? "" : " (" + why + ")")) {}
};

class AddressInUse : public Error {
public:
    explicit AddressInUse(const std::string& address) : Error("address in use: " + address) {}
};

}  // namespace adaptiflow

#endif  // ADAPTIFLOW_ERRORS_HPP_
