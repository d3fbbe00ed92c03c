/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.
 */

package org.apache.zookeeper.version;

/**
 * Prints version information.
 */
public class VersionInfoMain implements org.apache.zookeeper.version.Info {

    public static void main(String[] args) {
        if (args.length == 0) {
            System.out.println("3.9.2-obfs" + "-" + REVISION_HASH + ", built on " + BUILD_DATE);
        }
    }

}
