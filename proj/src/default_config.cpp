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

#include "tracescope/config.hpp"

namespace tracescope {

namespace {

struct ApiEntry {
    const char* cls;
    const char* method;
};

// Shipped multi-layer event set: 50 framework API methods.
constexpr ApiEntry kApiMethods[] = {
    {"android.telephony.TelephonyManager", "getImei"},
    {"android.telephony.TelephonyManager", "getSubscriberId"},
    {"android.telephony.TelephonyManager", "getLine1Number"},
    {"android.telephony.TelephonyManager", "getNetworkOperatorName"},
    {"android.telephony.TelephonyManager", "getNetworkCountryIso"},
    {"android.telephony.TelephonyManager", "getCellLocation"},
    {"android.telephony.TelephonyManager", "getAllCellInfo"},
    {"android.telephony.TelephonyManager", "listen"},
    {"android.os.Debug", "isDebuggerConnected"},
    {"android.app.SharedPreferencesImpl$EditorImpl", "putString"},
    {"android.app.SharedPreferencesImpl$EditorImpl", "putBoolean"},
    {"android.app.SharedPreferencesImpl$EditorImpl", "putInt"},
    {"android.app.SharedPreferencesImpl$EditorImpl", "putLong"},
    {"android.app.SharedPreferencesImpl$EditorImpl", "putFloat"},
    {"android.app.ActivityThread", "handleReceiver"},
    {"dalvik.system.BaseDexClassLoader", "findClass"},
    {"dalvik.system.BaseDexClassLoader", "findResource"},
    {"dalvik.system.BaseDexClassLoader", "findResources"},
    {"dalvik.system.BaseDexClassLoader", "findLibrary"},
    {"java.lang.ClassLoader", "loadClass"},
    {"android.app.ApplicationPackageManager", "setComponentEnabledSetting"},
    {"android.app.NotificationManager", "notify"},
    {"android.util.Base64", "decode"},
    {"android.util.Base64", "encode"},
    {"android.util.Base64", "encodeToString"},
    {"android.content.ContentResolver", "query"},
    {"android.content.ContentResolver", "registerContentObserver"},
    {"android.content.ContentResolver", "insert"},
    {"android.accounts.AccountManager", "getAccountsByType"},
    {"android.accounts.AccountManager", "getAccounts"},
    {"android.location.Location", "getLatitude"},
    {"android.location.Location", "getLongitude"},
    {"android.content.ContentResolver", "delete"},
    {"android.media.MediaRecorder", "start"},
    {"android.app.ApplicationPackageManager", "getInstalledPackages"},
    {"android.app.ActivityManager", "getRunningAppProcesses"},
    {"android.app.ActivityManager", "getRunningTasks"},
    {"dalvik.system.DexFile", "openDexFile"},
    {"android.content.ContextWrapper", "startService"},
    {"android.content.ContextWrapper", "startActivity"},
    {"android.view.View", "setOnClickListener"},
    {"java.lang.reflect.Method", "invoke"},
    {"android.os.PowerManager", "newWakeLock"},
    {"android.view.WindowManager", "addView"},
    {"android.content.res.AssetManager", "open"},
    {"android.content.res.AssetManager", "openNonAssetFd"},
    {"android.app.ContextImpl", "getSystemService"},
    {"android.app.usage.UsageStatsManager", "queryUsageStats"},
    {"java.lang.Thread", "sleep"},
    {"java.lang.reflect.Proxy", "newProxyInstance"},
};

// 49 system calls, named as in the shipped set.
constexpr const char* kSyscalls[] = {
    "execve", "execveat", "fork", "vfork", "clone", "open", "openat", "stat",
    "lstat", "bpf", "perf_event_open", "access", "faccessat", "unlink",
    "unlinkat", "symlink", "symlinkat", "chmod", "fchmod", "fchmodat", "chown",
    "fchown", "fchownat", "lchown", "ptrace", "setuid", "setgid", "setreuid",
    "setregid", "setfsuid", "setfsgid", "kill", "tkill", "tgkill", "mknod",
    "mknodat", "mount", "umount", "init_module", "finit_module",
    "delete_module", "connect", "accept", "accept4", "listen",
    "process_vm_readv", "process_vm_writev", "inotify_add_watch",
    "memfd_create",
};

constexpr const char* kKprobes[] = {
    "sched_process_exit",
    "vfs_write",
    "security_bprm_check",
};

} // namespace

HooksConfig default_multilayer_config()
{
    HooksConfig cfg;
    cfg.hooks.reserve(std::size(kApiMethods) + std::size(kSyscalls) + std::size(kKprobes) + 4);
    for (const ApiEntry& e : kApiMethods)
        cfg.hooks.push_back(HookSpec::api(e.cls, e.method));
    for (const char* name : kSyscalls)
        cfg.hooks.push_back(HookSpec::syscall(name));
    for (const char* name : kKprobes)
        cfg.hooks.push_back(HookSpec::kprobe(name));
    // 4 native library functions, with their C signatures as declared arg types.
    cfg.hooks.push_back(HookSpec::uprobe("libbinder_ndk.so", "AIBinder_new",
                                         {ArgType::Addr, ArgType::Addr}));
    cfg.hooks.push_back(HookSpec::uprobe("libcamera2ndk.so", "ACameraManager_openCamera",
                                         {ArgType::Addr, ArgType::Str, ArgType::Addr, ArgType::Addr}));
    cfg.hooks.push_back(HookSpec::uprobe("libc.so", "open", {ArgType::Str, ArgType::Int}));
    cfg.hooks.push_back(HookSpec::uprobe("libdl.so", "dlopen", {ArgType::Str, ArgType::Int}));
    cfg.filter = FilterSpec::all_user_apps();
    return cfg;
}

} // namespace tracescope
