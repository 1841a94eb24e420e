/*
 * Copyright 2026 The Tracescope Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "tracescope/syscalls.hpp"

#include <unordered_map>

namespace tracescope {

namespace {

using A = ArgType;

// Generated from include/uapi/asm-generic/unistd.h (the arm64 table).
constexpr SyscallInfo kTable[] = {
    {0, "io_setup", 0, {}},
    {1, "io_destroy", 0, {}},
    {2, "io_submit", 0, {}},
    {3, "io_cancel", 0, {}},
    {4, "io_getevents", 0, {}},
    {5, "setxattr", 0, {}},
    {6, "lsetxattr", 0, {}},
    {7, "fsetxattr", 0, {}},
    {8, "getxattr", 0, {}},
    {9, "lgetxattr", 0, {}},
    {10, "fgetxattr", 0, {}},
    {11, "listxattr", 0, {}},
    {12, "llistxattr", 0, {}},
    {13, "flistxattr", 0, {}},
    {14, "removexattr", 0, {}},
    {15, "lremovexattr", 0, {}},
    {16, "fremovexattr", 0, {}},
    {17, "getcwd", 0, {}},
    {18, "lookup_dcookie", 0, {}},
    {19, "eventfd2", 0, {}},
    {20, "epoll_create1", 0, {}},
    {21, "epoll_ctl", 0, {}},
    {22, "epoll_pwait", 0, {}},
    {23, "dup", 0, {}},
    {24, "dup3", 0, {}},
    {25, "fcntl", 0, {}},
    {26, "inotify_init1", 0, {}},
    {27, "inotify_add_watch", 2, {A::Int, A::Str}},
    {28, "inotify_rm_watch", 0, {}},
    {29, "ioctl", 0, {}},
    {30, "ioprio_set", 0, {}},
    {31, "ioprio_get", 0, {}},
    {32, "flock", 0, {}},
    {33, "mknodat", 0, {}},
    {34, "mkdirat", 0, {}},
    {35, "unlinkat", 2, {A::Int, A::Str}},
    {36, "symlinkat", 0, {}},
    {37, "linkat", 0, {}},
    {38, "renameat", 0, {}},
    {39, "umount2", 0, {}},
    {40, "mount", 0, {}},
    {41, "pivot_root", 0, {}},
    {42, "nfsservctl", 0, {}},
    {43, "statfs", 0, {}},
    {44, "fstatfs", 0, {}},
    {45, "truncate", 0, {}},
    {46, "ftruncate", 0, {}},
    {47, "fallocate", 0, {}},
    {48, "faccessat", 2, {A::Int, A::Str}},
    {49, "chdir", 0, {}},
    {50, "fchdir", 0, {}},
    {51, "chroot", 0, {}},
    {52, "fchmod", 0, {}},
    {53, "fchmodat", 0, {}},
    {54, "fchownat", 0, {}},
    {55, "fchown", 0, {}},
    {56, "openat", 4, {A::Int, A::Str, A::Int, A::Uint}},
    {57, "close", 1, {A::Int}},
    {58, "vhangup", 0, {}},
    {59, "pipe2", 0, {}},
    {60, "quotactl", 0, {}},
    {61, "getdents64", 0, {}},
    {62, "lseek", 0, {}},
    {63, "read", 0, {}},
    {64, "write", 0, {}},
    {65, "readv", 0, {}},
    {66, "writev", 0, {}},
    {67, "pread64", 0, {}},
    {68, "pwrite64", 0, {}},
    {69, "preadv", 0, {}},
    {70, "pwritev", 0, {}},
    {71, "sendfile", 0, {}},
    {72, "pselect6", 0, {}},
    {73, "ppoll", 0, {}},
    {74, "signalfd4", 0, {}},
    {75, "vmsplice", 0, {}},
    {76, "splice", 0, {}},
    {77, "tee", 0, {}},
    {78, "readlinkat", 0, {}},
    {79, "newfstatat", 0, {}},
    {80, "fstat", 0, {}},
    {81, "sync", 0, {}},
    {82, "fsync", 0, {}},
    {83, "fdatasync", 0, {}},
    {84, "sync_file_range", 0, {}},
    {85, "timerfd_create", 0, {}},
    {86, "timerfd_settime", 0, {}},
    {87, "timerfd_gettime", 0, {}},
    {88, "utimensat", 0, {}},
    {89, "acct", 0, {}},
    {90, "capget", 0, {}},
    {91, "capset", 0, {}},
    {92, "personality", 0, {}},
    {93, "exit", 1, {A::Int}},
    {94, "exit_group", 1, {A::Int}},
    {95, "waitid", 0, {}},
    {96, "set_tid_address", 0, {}},
    {97, "unshare", 0, {}},
    {98, "futex", 0, {}},
    {99, "set_robust_list", 0, {}},
    {100, "get_robust_list", 0, {}},
    {101, "nanosleep", 0, {}},
    {102, "getitimer", 0, {}},
    {103, "setitimer", 0, {}},
    {104, "kexec_load", 0, {}},
    {105, "init_module", 0, {}},
    {106, "delete_module", 0, {}},
    {107, "timer_create", 0, {}},
    {108, "timer_gettime", 0, {}},
    {109, "timer_getoverrun", 0, {}},
    {110, "timer_settime", 0, {}},
    {111, "timer_delete", 0, {}},
    {112, "clock_settime", 0, {}},
    {113, "clock_gettime", 0, {}},
    {114, "clock_getres", 0, {}},
    {115, "clock_nanosleep", 0, {}},
    {116, "syslog", 0, {}},
    {117, "ptrace", 4, {A::Long, A::Int, A::Addr, A::Addr}},
    {118, "sched_setparam", 0, {}},
    {119, "sched_setscheduler", 0, {}},
    {120, "sched_getscheduler", 0, {}},
    {121, "sched_getparam", 0, {}},
    {122, "sched_setaffinity", 0, {}},
    {123, "sched_getaffinity", 0, {}},
    {124, "sched_yield", 0, {}},
    {125, "sched_get_priority_max", 0, {}},
    {126, "sched_get_priority_min", 0, {}},
    {127, "sched_rr_get_interval", 0, {}},
    {128, "restart_syscall", 0, {}},
    {129, "kill", 2, {A::Int, A::Int}},
    {130, "tkill", 2, {A::Int, A::Int}},
    {131, "tgkill", 3, {A::Int, A::Int, A::Int}},
    {132, "sigaltstack", 0, {}},
    {133, "rt_sigsuspend", 0, {}},
    {134, "rt_sigaction", 0, {}},
    {135, "rt_sigprocmask", 0, {}},
    {136, "rt_sigpending", 0, {}},
    {137, "rt_sigtimedwait", 0, {}},
    {138, "rt_sigqueueinfo", 0, {}},
    {139, "rt_sigreturn", 0, {}},
    {140, "setpriority", 0, {}},
    {141, "getpriority", 0, {}},
    {142, "reboot", 0, {}},
    {143, "setregid", 2, {A::Uint, A::Uint}},
    {144, "setgid", 1, {A::Uint}},
    {145, "setreuid", 2, {A::Uint, A::Uint}},
    {146, "setuid", 1, {A::Uint}},
    {147, "setresuid", 3, {A::Uint, A::Uint, A::Uint}},
    {148, "getresuid", 0, {}},
    {149, "setresgid", 0, {}},
    {150, "getresgid", 0, {}},
    {151, "setfsuid", 1, {A::Uint}},
    {152, "setfsgid", 1, {A::Uint}},
    {153, "times", 0, {}},
    {154, "setpgid", 0, {}},
    {155, "getpgid", 0, {}},
    {156, "getsid", 0, {}},
    {157, "setsid", 0, {}},
    {158, "getgroups", 0, {}},
    {159, "setgroups", 0, {}},
    {160, "uname", 0, {}},
    {161, "sethostname", 0, {}},
    {162, "setdomainname", 0, {}},
    {163, "getrlimit", 0, {}},
    {164, "setrlimit", 0, {}},
    {165, "getrusage", 0, {}},
    {166, "umask", 0, {}},
    {167, "prctl", 0, {}},
    {168, "getcpu", 0, {}},
    {169, "gettimeofday", 0, {}},
    {170, "settimeofday", 0, {}},
    {171, "adjtimex", 0, {}},
    {172, "getpid", 0, {}},
    {173, "getppid", 0, {}},
    {174, "getuid", 0, {}},
    {175, "geteuid", 0, {}},
    {176, "getgid", 0, {}},
    {177, "getegid", 0, {}},
    {178, "gettid", 0, {}},
    {179, "sysinfo", 0, {}},
    {180, "mq_open", 0, {}},
    {181, "mq_unlink", 0, {}},
    {182, "mq_timedsend", 0, {}},
    {183, "mq_timedreceive", 0, {}},
    {184, "mq_notify", 0, {}},
    {185, "mq_getsetattr", 0, {}},
    {186, "msgget", 0, {}},
    {187, "msgctl", 0, {}},
    {188, "msgrcv", 0, {}},
    {189, "msgsnd", 0, {}},
    {190, "semget", 0, {}},
    {191, "semctl", 0, {}},
    {192, "semtimedop", 0, {}},
    {193, "semop", 0, {}},
    {194, "shmget", 0, {}},
    {195, "shmctl", 0, {}},
    {196, "shmat", 0, {}},
    {197, "shmdt", 0, {}},
    {198, "socket", 3, {A::Int, A::Int, A::Int}},
    {199, "socketpair", 0, {}},
    {200, "bind", 0, {}},
    {201, "listen", 2, {A::Int, A::Int}},
    {202, "accept", 0, {}},
    {203, "connect", 3, {A::Int, A::Addr, A::Uint}},
    {204, "getsockname", 0, {}},
    {205, "getpeername", 0, {}},
    {206, "sendto", 0, {}},
    {207, "recvfrom", 0, {}},
    {208, "setsockopt", 0, {}},
    {209, "getsockopt", 0, {}},
    {210, "shutdown", 0, {}},
    {211, "sendmsg", 0, {}},
    {212, "recvmsg", 0, {}},
    {213, "readahead", 0, {}},
    {214, "brk", 0, {}},
    {215, "munmap", 0, {}},
    {216, "mremap", 0, {}},
    {217, "add_key", 0, {}},
    {218, "request_key", 0, {}},
    {219, "keyctl", 0, {}},
    {220, "clone", 5, {A::Ulong, A::Addr, A::Addr, A::Addr, A::Ulong}},
    {221, "execve", 3, {A::Str, A::Addr, A::Addr}},
    {222, "mmap", 0, {}},
    {223, "fadvise64", 0, {}},
    {224, "swapon", 0, {}},
    {225, "swapoff", 0, {}},
    {226, "mprotect", 0, {}},
    {227, "msync", 0, {}},
    {228, "mlock", 0, {}},
    {229, "munlock", 0, {}},
    {230, "mlockall", 0, {}},
    {231, "munlockall", 0, {}},
    {232, "mincore", 0, {}},
    {233, "madvise", 0, {}},
    {234, "remap_file_pages", 0, {}},
    {235, "mbind", 0, {}},
    {236, "get_mempolicy", 0, {}},
    {237, "set_mempolicy", 0, {}},
    {238, "migrate_pages", 0, {}},
    {239, "move_pages", 0, {}},
    {240, "rt_tgsigqueueinfo", 0, {}},
    {241, "perf_event_open", 0, {}},
    {242, "accept4", 0, {}},
    {243, "recvmmsg", 0, {}},
    {260, "wait4", 0, {}},
    {261, "prlimit64", 0, {}},
    {262, "fanotify_init", 0, {}},
    {263, "fanotify_mark", 0, {}},
    {264, "name_to_handle_at", 0, {}},
    {265, "open_by_handle_at", 0, {}},
    {266, "clock_adjtime", 0, {}},
    {267, "syncfs", 0, {}},
    {268, "setns", 0, {}},
    {269, "sendmmsg", 0, {}},
    {270, "process_vm_readv", 0, {}},
    {271, "process_vm_writev", 0, {}},
    {272, "kcmp", 0, {}},
    {273, "finit_module", 0, {}},
    {274, "sched_setattr", 0, {}},
    {275, "sched_getattr", 0, {}},
    {276, "renameat2", 0, {}},
    {277, "seccomp", 0, {}},
    {278, "getrandom", 0, {}},
    {279, "memfd_create", 2, {A::Str, A::Uint}},
    {280, "bpf", 3, {A::Int, A::Addr, A::Uint}},
    {281, "execveat", 0, {}},
    {282, "userfaultfd", 0, {}},
    {283, "membarrier", 0, {}},
    {284, "mlock2", 0, {}},
    {285, "copy_file_range", 0, {}},
    {286, "preadv2", 0, {}},
    {287, "pwritev2", 0, {}},
    {288, "pkey_mprotect", 0, {}},
    {289, "pkey_alloc", 0, {}},
    {290, "pkey_free", 0, {}},
    {291, "statx", 0, {}},
    {292, "io_pgetevents", 0, {}},
    {293, "rseq", 0, {}},
    {294, "kexec_file_load", 0, {}},
    {424, "pidfd_send_signal", 0, {}},
    {425, "io_uring_setup", 0, {}},
    {426, "io_uring_enter", 0, {}},
    {427, "io_uring_register", 0, {}},
    {428, "open_tree", 0, {}},
    {429, "move_mount", 0, {}},
    {430, "fsopen", 0, {}},
    {431, "fsconfig", 0, {}},
    {432, "fsmount", 0, {}},
    {433, "fspick", 0, {}},
    {434, "pidfd_open", 0, {}},
    {435, "clone3", 2, {A::Addr, A::Ulong}},
    {436, "close_range", 0, {}},
    {437, "openat2", 0, {}},
    {438, "pidfd_getfd", 0, {}},
    {439, "faccessat2", 0, {}},
    {440, "process_madvise", 0, {}},
};

const std::unordered_map<uint32_t, const SyscallInfo*>& by_nr_index()
{
    static const auto* index = [] {
        auto* m = new std::unordered_map<uint32_t, const SyscallInfo*>();
        for (const auto& e : kTable)
            m->emplace(e.nr, &e);
        return m;
    }();
    return *index;
}

const std::unordered_map<std::string_view, const SyscallInfo*>& by_name_index()
{
    static const auto* index = [] {
        auto* m = new std::unordered_map<std::string_view, const SyscallInfo*>();
        for (const auto& e : kTable)
            m->emplace(e.name, &e);
        return m;
    }();
    return *index;
}

} // namespace

std::span<const SyscallInfo> syscall_table()
{
    return kTable;
}

const SyscallInfo* syscall_by_nr(uint32_t nr)
{
    auto it = by_nr_index().find(nr);
    return it == by_nr_index().end() ? nullptr : it->second;
}

const SyscallInfo* syscall_by_name(std::string_view name)
{
    auto it = by_name_index().find(name);
    return it == by_name_index().end() ? nullptr : it->second;
}

std::string syscall_name(uint32_t nr)
{
    if (const SyscallInfo* info = syscall_by_nr(nr))
        return info->name;
    return "syscall_" + std::to_string(nr);
}

} // namespace tracescope
