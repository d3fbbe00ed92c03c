/*
 * Copyright (C) 2007-2010 Júlio Vilmar Gesser.
 * Copyright (C) 2011, 2013-2023 The JavaParser Team.
 */
package com.github.javaparser.utils;

/**
 * Some information that was available when this library was built by Maven.
 */
public class JavaParserBuild {
    public static final String PROJECT_VERSION = "3.25.4";
    public static final String PROJECT_NAME = "javaparser-core";
    public static final String PROJECT_BUILD_FINAL_NAME = "javaparser-core-3.25.4";
    public static final String MAVEN_VERSION = "3.9.2";
    public static final String MAVEN_BUILD_VERSION = "Apache Maven 3.9.2 (c9616018c7a021c1c39be70fb2843d6f5f9b8a1c)";
    public static final String MAVEN_BUILD_TIMESTAMP = "2023-11-02T09:12:03Z";
    public static final String JAVA_VENDOR = "Private Build";
    public static final String JAVA_VENDOR_URL = "https://adoptium.net/";
    public static final String JAVA_VERSION = "17.0.8";
    public static final String OS_ARCH = "amd64";
    public static final String OS_NAME = "Linux";
    public static final String OS_VERSION = "5.15.0-1049-gcp";
}
